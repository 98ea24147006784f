//! The Bass–Serre tree of a graph of `ℤⁿ` groups, the exact fiber action
//! `Θ` on `ℝⁿ`, and the diagonal action on `T × ℝⁿ`.

mod affine;
mod product;
mod theta;
mod tree;

pub use affine::AffineMap;
pub use product::{product_act, Fiber, ProductPoint};
pub use theta::{
    lift_maps, theta, verify_relators, FiberAction, LiftMaps, RelatorCheck, RelatorReport,
    TreeEdgeCheck,
};
pub use tree::{
    tree_act, tree_ball, tree_distance, tree_neighbors, TreeBall, TreeBallEdge, TreeBallVertex,
    TreeEdge, TreeVertex,
};
