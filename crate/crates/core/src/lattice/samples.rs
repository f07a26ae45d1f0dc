//! Small groups used by the tests, the CLI and the guide.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{fuchsian_embed, GroupSpec};
use crate::chgeom::Isometry;

/// `⟨g⟩` with `g` the loxodromic of length `l` along the `e₁` axis.
pub fn cyclic(n: usize, l: f64, max_word_length: usize) -> GroupSpec {
    GroupSpec::new(n, vec![Isometry::loxodromic(n, l, &[])], true, max_word_length).expect("valid generator")
}

/// Two loxodromics of length `l` whose axes through the origin are
/// orthogonal (`e₁` and `i e₁`). They play ping-pong, hence generate a free
/// discrete group, once `l ≥ asinh 1 ≈ 0.8814`.
pub fn ping_pong(n: usize, l: f64, max_word_length: usize) -> GroupSpec {
    let a = Isometry::loxodromic(n, l, &[]);
    let mut u = DMatrix::identity(n, n);
    u[(0, 0)] = Complex64::i();
    let r = Isometry::unitary(&u).expect("diagonal unitary");
    let b = r.compose(&a).compose(&r.inverse());
    GroupSpec::new(n, vec![a, b], true, max_word_length).expect("valid generators")
}

/// `PSL(2, Z)` from `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]`, moved to the
/// ball so that `i` becomes the origin.
pub fn modular() -> GroupSpec {
    let s = fuchsian_embed([[0.0, -1.0], [1.0, 0.0]]).expect("det 1");
    let t = fuchsian_embed([[1.0, 1.0], [0.0, 1.0]]).expect("det 1");
    GroupSpec::new(1, vec![s, t], true, 400).expect("valid generators")
}
