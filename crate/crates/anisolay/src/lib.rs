//! Everything around the solver that touches the outside world: bundled
//! datasets, edge list and JSON graph formats, layout and trace
//! serialization, and SVG rendering. The layout math itself lives in
//! `anisolay-core`.

pub mod colormap;
pub mod datasets;
pub mod error;
pub mod formats;
pub mod render;
