//! Enumeration and precoloring-extension analysis of plane
//! near-triangulations whose outer face is a short cycle.

pub mod plane;
pub mod coloring;
pub mod construct;
pub mod enumerate;
pub mod weak;
pub mod reducibility;
pub mod cli;
