//! Shared helpers for the benchmark suite.

use glp_core::Formula;

/// Nested boxes `[0][0]...[0]p0`, a cheap way to grow formula depth.
pub fn nested_boxes(depth: u32) -> Formula {
    let mut f = Formula::Var(0);
    for _ in 0..depth {
        f = Formula::bx(0, f);
    }
    f
}
