//! Canvas-based descriptions of digitized manuscripts.
//!
//! Pages are modelled as empty, dimensioned canvases. Images, transcriptions
//! and commentary are attached by annotations, reusable areas (zones) can be
//! placed on several canvases, and sequences record one or more orderings
//! of the pages. The crate builds such descriptions ([`model`]), reads and
//! writes them as Turtle ([`rdf`]), checks them ([`validate`]), flattens
//! them into per-canvas paint plans ([`resolve`]) and writes static SVG and
//! HTML facsimiles ([`render`]).

pub mod cli;
pub mod description;
pub mod fixtures;
pub mod fragments;
pub mod model;
pub mod rdf;
pub mod render;
pub mod resolve;
pub mod validate;
