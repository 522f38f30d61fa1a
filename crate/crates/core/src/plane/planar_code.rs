//! The `planar_code` byte format and a JSON-lines debug dump.
//!
//! A stream starts with `>>planar_code<<`. Each graph is its vertex count
//! followed, for every vertex in order, by its neighbors in clockwise order
//! terminated by 0; vertices are numbered from 1. Graphs with 256 or more
//! vertices use a leading 0 byte and little-endian 16-bit entries. The outer
//! face is recorded implicitly: vertex 1 is external and its list begins with
//! its successor along the outer face.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Canvas, PlaneError, RotationGraph};

pub const HEADER: &[u8] = b">>planar_code<<";

#[derive(Debug, Error)]
pub enum PlanarCodeError {
    #[error("missing >>planar_code<< header")]
    MissingHeader,
    #[error("truncated stream at byte {0}")]
    Truncated(usize),
    #[error("neighbor {value} out of range at byte {offset}")]
    OutOfRange { offset: usize, value: usize },
    #[error("graph ending at byte {offset} is invalid: {source}")]
    Invalid {
        offset: usize,
        #[source]
        source: PlaneError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Encodes one canvas (without the header).
pub fn encode_planar_code(c: &Canvas) -> Vec<u8> {
    let n = c.vertex_count();
    let x1 = c.outer()[0];
    // swap x1 with vertex 0 so it is listed first
    let perm: Vec<usize> = (0..n)
        .map(|v| if v == x1 { 0 } else if v == 0 { x1 } else { v })
        .collect();
    let c = c.relabeled(&perm);
    let x2 = c.outer()[1];
    let wide = n >= 256;
    let mut out = Vec::new();
    let put = |out: &mut Vec<u8>, x: usize| {
        if wide {
            out.extend_from_slice(&(x as u16).to_le_bytes());
        } else {
            out.push(x as u8);
        }
    };
    if wide {
        out.push(0);
    }
    put(&mut out, n);
    for v in 0..n {
        let r = c.neighbors(v);
        let d = r.len();
        let start = if v == 0 { r.iter().position(|&u| u == x2).unwrap() } else { 0 };
        // clockwise from `start`
        for s in 0..d {
            put(&mut out, r[(start + d - s) % d] + 1);
        }
        put(&mut out, 0);
    }
    out
}

/// Encodes a list of canvases as a full stream with header.
pub fn encode_stream(canvases: &[Canvas]) -> Vec<u8> {
    let mut out = HEADER.to_vec();
    for c in canvases {
        out.extend(encode_planar_code(c));
    }
    out
}

pub fn write_stream<W: Write>(mut w: W, canvases: &[Canvas]) -> io::Result<()> {
    w.write_all(&encode_stream(canvases))
}

/// Decodes a full stream (header required). An empty body yields an empty
/// list.
pub fn decode_planar_code(bytes: &[u8]) -> Result<Vec<Canvas>, PlanarCodeError> {
    let body = bytes
        .strip_prefix(HEADER)
        .ok_or(PlanarCodeError::MissingHeader)?;
    let mut pos = HEADER.len();
    let end = bytes.len();
    let mut out = Vec::new();
    debug_assert_eq!(&bytes[pos..], body);
    while pos < end {
        let byte = |p: usize| bytes.get(p).copied().ok_or(PlanarCodeError::Truncated(p));
        let mut wide = false;
        let mut n = byte(pos)? as usize;
        pos += 1;
        if n == 0 {
            wide = true;
            n = read_u16(bytes, pos)?;
            pos += 2;
        }
        let mut rot = Vec::with_capacity(n);
        for _ in 0..n {
            let mut r = Vec::new();
            loop {
                let at = pos;
                let x = if wide {
                    pos += 2;
                    read_u16(bytes, at)?
                } else {
                    pos += 1;
                    byte(at)? as usize
                };
                if x == 0 {
                    break;
                }
                if x > n {
                    return Err(PlanarCodeError::OutOfRange { offset: at, value: x });
                }
                r.push(x - 1);
            }
            // stored clockwise
            r.reverse();
            rot.push(r);
        }
        let invalid = |source| PlanarCodeError::Invalid { offset: pos, source };
        if n == 0 || rot[0].is_empty() {
            return Err(invalid(PlaneError::Input("graph without edges".into())));
        }
        let first = *rot[0].last().unwrap();
        let g = RotationGraph::new(rot).map_err(invalid)?;
        let outer = g.face_walk(0, first);
        out.push(Canvas::new_raw(g, outer).map_err(invalid)?);
    }
    Ok(out)
}

fn read_u16(bytes: &[u8], p: usize) -> Result<usize, PlanarCodeError> {
    match bytes.get(p..p + 2) {
        Some(s) => Ok(u16::from_le_bytes([s[0], s[1]]) as usize),
        None => Err(PlanarCodeError::Truncated(p)),
    }
}

pub fn read_stream<R: Read>(mut r: R) -> Result<Vec<Canvas>, PlanarCodeError> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    decode_planar_code(&buf)
}

/// One line of the JSON debug dump.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonCanvas {
    pub vertex_count: usize,
    pub rotations: Vec<Vec<usize>>,
    pub outer_face: Vec<usize>,
}

impl From<&Canvas> for JsonCanvas {
    fn from(c: &Canvas) -> Self {
        JsonCanvas {
            vertex_count: c.vertex_count(),
            rotations: c.graph().rotations().to_vec(),
            outer_face: c.outer().to_vec(),
        }
    }
}

impl JsonCanvas {
    pub fn to_canvas(&self) -> Result<Canvas, PlaneError> {
        if self.rotations.len() != self.vertex_count {
            return Err(PlaneError::Input("vertex count does not match rotations".into()));
        }
        Canvas::new_raw(RotationGraph::new(self.rotations.clone())?, self.outer_face.clone())
    }
}

pub fn to_json_line(c: &Canvas) -> String {
    serde_json::to_string(&JsonCanvas::from(c)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::canonical_code;

    fn diamond() -> Canvas {
        Canvas::from_face_list(4, &[vec![0, 1, 2], vec![0, 2, 3]], &[0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn diamond_round_trip() {
        let d = diamond().with_outer_start(1);
        let bytes = encode_stream(&[d.clone()]);
        let back = decode_planar_code(&bytes).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(canonical_code(&back[0]), canonical_code(&d));
        assert!(!back[0].clone().into_strict().unwrap().is_raw());
    }

    #[test]
    fn empty_body() {
        assert!(decode_planar_code(HEADER).unwrap().is_empty());
        assert!(matches!(decode_planar_code(b"xx"), Err(PlanarCodeError::MissingHeader)));
    }

    #[test]
    fn extra_rotation_rejected() {
        // vertex count 2 followed by three rotation lists
        let mut bytes = HEADER.to_vec();
        bytes.extend([2, 2, 0, 1, 0, 1, 0]);
        assert!(decode_planar_code(&bytes).is_err());
    }

    #[test]
    fn truncated_and_out_of_range() {
        let mut bytes = HEADER.to_vec();
        bytes.extend([3, 2, 3, 0, 3]);
        assert!(matches!(decode_planar_code(&bytes), Err(PlanarCodeError::Truncated(_))));
        let mut bytes = HEADER.to_vec();
        bytes.extend([3, 2, 7, 0]);
        assert!(matches!(
            decode_planar_code(&bytes),
            Err(PlanarCodeError::OutOfRange { value: 7, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let d = diamond();
        let line = to_json_line(&d);
        let j: JsonCanvas = serde_json::from_str(&line).unwrap();
        assert_eq!(j.to_canvas().unwrap().into_strict().unwrap(), d);
    }
}
