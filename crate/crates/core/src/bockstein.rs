//! Connecting homomorphisms of coefficient sequences and lifting tests.

use num_traits::Zero;

use crate::chain::{ChainComplexData, ClassHandle, Cochain, Direction};
use crate::coefficients::{CoefficientSystem, PresentedGroup, ShortExactSequence};
use crate::error::AlgebraError;
use crate::group::GroupDescriptor;
use crate::matrix::{Integer, IntegerMatrix};
use crate::snf::smith_normal_form;

#[derive(Clone, Debug)]
pub struct BocksteinResult {
    /// Lift of the input to a `B`-valued cochain.
    pub lift: Cochain,
    /// `δ(lift)` divided back into `A`, reduced against coboundaries.
    pub image: Cochain,
    pub class: ClassHandle,
}

fn system(name: &str, g: &PresentedGroup) -> CoefficientSystem {
    CoefficientSystem::new(name, g.clone())
}

/// Does `δx` vanish in the coefficient group.
pub fn is_cocycle(c: &ChainComplexData, x: &Cochain, coeffs: &CoefficientSystem) -> bool {
    c.coboundary(x, coeffs).is_zero_in(coeffs)
}

/// `[m | R'ᵀ]`: solutions give preimages under `m` modulo relations.
fn with_relations(m: &IntegerMatrix, target: &PresentedGroup) -> IntegerMatrix {
    let rt = target.relation_basis().transpose();
    IntegerMatrix::block(&[m.rows()], &[m.cols(), rt.cols()], &[vec![Some(m), Some(&rt)]])
}

fn solve_entries(
    m: &IntegerMatrix,
    target: &PresentedGroup,
    values: &[Vec<Integer>],
    what: &str,
) -> Result<Vec<Vec<Integer>>, AlgebraError> {
    let snf = smith_normal_form(&with_relations(m, target));
    values
        .iter()
        .map(|v| {
            snf.solve(v)
                .map(|s| s[..m.cols()].to_vec())
                .ok_or_else(|| AlgebraError::NoLift(what.to_string()))
        })
        .collect()
}

/// `β(x)` for a `C`-valued cocycle through `0 → A → B → C → 0`.
pub fn bockstein(c: &ChainComplexData, x: &Cochain, seq: &ShortExactSequence) -> Result<BocksteinResult, AlgebraError> {
    let (ca, cb, cc) = (system("A", &seq.a), system("B", &seq.b), system("C", &seq.c));
    let d = x.degree;
    if x.generators != seq.c.generators() || x.len() != c.dims().get(d).copied().unwrap_or(0) {
        return Err(AlgebraError::Dimension("cochain does not match the complex and sequence".into()));
    }
    if !is_cocycle(c, x, &cc) {
        return Err(AlgebraError::NotACocycle(d));
    }
    let lift_values = solve_entries(&seq.pi.matrix, &seq.c, &x.values, "B → C is not onto the values of x")?;
    let lift = Cochain { degree: d, generators: seq.b.generators(), values: lift_values };
    let dy = c.coboundary(&lift, &cb);
    if d >= c.top() {
        let empty = Cochain::zero(d + 1, 0, seq.a.generators());
        let class = ClassHandle { degree: d + 1, group: GroupDescriptor::zero(), coordinates: Vec::new() };
        return Ok(BocksteinResult { lift, image: empty, class });
    }
    let a_values =
        solve_entries(&seq.i.matrix, &seq.b, &dy.values, "coboundary of the lift does not come from A")?;
    let a = Cochain { degree: d + 1, generators: seq.a.generators(), values: a_values };
    let classes = c.classes(d + 1, &ca, Direction::Cohomology)?;
    let class = classes.class_of(&a)?;
    let image = classes.canonical(&a)?;
    Ok(BocksteinResult { lift, image, class })
}

/// Independent test of whether `[x]` comes from `H^d(K; B)`: solves for a
/// `B`-cochain `y`, a `C`-cochain `c` and relation coefficients with
/// `δy ≡ 0 (mod R_B)` and `π·y ≡ x + δc (mod R_C)` as one integer system.
/// Returns the cocycle `y` when it exists.
pub fn lift_exists(c: &ChainComplexData, x: &Cochain, seq: &ShortExactSequence) -> Result<Option<Cochain>, AlgebraError> {
    let d = x.degree;
    let dims = c.dims();
    let n = |k: isize| if k < 0 || k as usize > c.top() { 0 } else { dims[k as usize] };
    let (gb, gc) = (seq.b.generators(), seq.c.generators());
    let (rb, rc) = (seq.b.relation_basis().transpose(), seq.c.relation_basis().transpose());
    let (mb, mc) = (rb.cols(), rc.cols());
    let (nd, nm, np) = (n(d as isize), n(d as isize - 1), n(d as isize + 1));
    if x.len() != nd || x.generators != gc {
        return Err(AlgebraError::Dimension("cochain does not match the complex and sequence".into()));
    }
    let cc = system("C", &seq.c);
    if !is_cocycle(c, x, &cc) {
        return Err(AlgebraError::NotACocycle(d));
    }
    let delta_d = if np > 0 { c.coboundary_matrix(d) } else { IntegerMatrix::zeros(0, nd) };
    let delta_prev = if d > 0 { c.coboundary_matrix(d - 1) } else { IntegerMatrix::zeros(nd, 0) };

    let b11 = delta_d.kron(&IntegerMatrix::identity(gb));
    let b13 = IntegerMatrix::identity(np).kron(&rb).neg();
    let b21 = IntegerMatrix::identity(nd).kron(&seq.pi.matrix);
    let b22 = delta_prev.kron(&IntegerMatrix::identity(gc)).neg();
    let b24 = IntegerMatrix::identity(nd).kron(&rc).neg();
    let rows = [np * gb, nd * gc];
    let cols = [nd * gb, nm * gc, np * mb, nd * mc];
    let m = IntegerMatrix::block(
        &rows,
        &cols,
        &[vec![Some(&b11), None, Some(&b13), None], vec![Some(&b21), Some(&b22), None, Some(&b24)]],
    );
    let mut rhs = vec![Integer::zero(); rows[0]];
    rhs.extend(x.flat());
    let snf = smith_normal_form(&m);
    Ok(snf.solve(&rhs).map(|z| Cochain::from_flat(d, gb, z[..nd * gb].to_vec())))
}
