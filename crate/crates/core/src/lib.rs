//! Exact computational toolkit for finite digital images.
//!
//! Decides rigidity and reducibility, verifies and minimizes freezing and
//! cold sets, and builds intervals, boxes, normal products and wedges. All
//! deciders reduce to one constraint-search engine over continuous maps
//! ([`search`]), with a map-space breadth-first search ([`homotopy`]) kept
//! as an independent cross-check.
//!
//! [`document`], [`report`] and [`render`] hold the file format, query
//! reports and drawings used by the command-line tool; [`corpus`] and
//! [`theorems`] generate test images and check the structural results on
//! them.

pub mod constructors;
pub mod corpus;
pub mod document;
pub mod error;
pub mod fixedpoint;
pub mod homotopy;
pub mod lattice;
pub mod maps;
pub mod render;
pub mod report;
pub mod search;
pub mod theorems;

pub use constructors::{digital_box, interval, lattice_symmetry, product, wedge, LatticeTransform, Wedge};
pub use document::{parse_document, parse_image_document, serialize, AdjacencyDocument, ImageDocument};
pub use error::{Error, Result};
pub use fixedpoint::{cold_sets_audit, is_freezing, is_s_cold, minimize_freezing, ColdSetAudit, PinRole, PinSet};
pub use homotopy::{are_homotopic, is_reducible, is_rigid, one_step_homotopic, Homotopy, HomotopySearch};
pub use lattice::{AdjacencySpec, CurveCheck, DigitalImage, Distance, IndexSet, PathSeq, Point};
pub use maps::{ImageMap, MapProfile};
pub use render::{render_2d, render_svg};
pub use report::{Report, Witness, TOOL_NAME, TOOL_VERSION};
pub use theorems::{verify_theorems, ClaimReport, Status, SuiteOptions, SuiteReport};
pub use search::{
    enumerate_continuous_maps, enumerate_continuous_self_maps, visit_continuous_maps, Enumeration, MapConstraints, SearchBudget,
    SearchMode, SearchOutcome, SearchStats, Verdict, VisitSummary,
};
