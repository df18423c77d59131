//! Subfactor principal graphs and Temperley-Lieb diagram algebras: graph strings, norms and
//! Frobenius-Perron weights, stability and jellyfish obstructions, and the jellyfish evaluation
//! algorithm on small generator systems.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod graph_codec;
pub mod graph_core;
pub mod jellyfish;
pub mod obstructions;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod tl_algebra;

pub use error::{Error, Result};
pub use graph_core::{BipartiteGraph, GraphPair, Vertex};
