//! Unitary representations of finite groups, the circle and `O(2)`.
//!
//! Finite groups are realized by breadth-first closure of unitary generators.
//! The circle and `O(2)` are sampled at `K` equispaced angles; every matrix
//! entry of their standard representations is a trigonometric polynomial of
//! degree at most `n`, so integrands `π(g)ᴴ P π(g)` have degree at most `2n`
//! and the equal-weight rule with `K ≥ 4n + 1` nodes integrates them exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::numkit::{
    self, is_unitary, nullspace, Matrix, NumError, Tolerances, ONE, ZERO,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generator {index} is not unitary")]
    NotUnitary { index: usize },
    #[error("generator {index} has size {found}, expected {expected}")]
    MixedSizes {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("group order exceeds the cap {cap}")]
    OrderCap { cap: usize },
    #[error("two distinct elements lie within {distance:.3e} of each other")]
    DedupAmbiguous { distance: f64 },
    #[error("{nodes} quadrature nodes are too few for frequency {frequency} (need at least {needed})")]
    InsufficientNodes {
        nodes: usize,
        frequency: u32,
        needed: usize,
    },
    #[error("form is not Hermitian positive semidefinite ({reason})")]
    NotHermitianPsd { reason: String },
    #[error("representation is not irreducible (commutant dimension {commutant_dim})")]
    NotIrreducible { commutant_dim: usize },
    #[error("unknown builtin representation '{0}'")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Finite,
    /// `θ ↦ e^{inθ}` on `C`.
    CircleCharacter,
    /// `θ ↦ diag(e^{inθ}, e^{−inθ})` on `C²` (reducible for every `n`).
    Circle,
    /// Rotations `diag(e^{inθ}, e^{−inθ})` and reflections `diag(e^{inθ}, e^{−inθ})·J`.
    Orthogonal2,
}

#[derive(Debug, Clone)]
pub struct GroupModel {
    pub kind: GroupKind,
    /// Unitary generators (finite kind only).
    pub generators: Vec<Matrix>,
    /// Frequency `n` (continuous kinds only).
    pub frequency: u32,
    /// Quadrature node count `K` (continuous kinds only).
    pub nodes: usize,
}

impl GroupModel {
    pub fn is_continuous(&self) -> bool {
        self.kind != GroupKind::Finite
    }
}

/// Haar probability weights aligned with the representation's element list.
#[derive(Debug, Clone)]
pub struct HaarScheme {
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct UnitaryRepresentation {
    pub model: GroupModel,
    pub dim: usize,
    /// Every group element (finite) or every quadrature element (continuous).
    pub elements: Vec<Matrix>,
    pub haar: HaarScheme,
    /// Elements whose conjugation action is checked for normalization and
    /// used to generate weight orbits.
    pub actors: Vec<Matrix>,
}

impl UnitaryRepresentation {
    pub fn finite(
        generators: Vec<Matrix>,
        tol: &Tolerances,
        max_order: usize,
    ) -> Result<Self, GroupError> {
        let elements = enumerate_finite_group(&generators, tol, max_order)?;
        let dim = generators[0].nrows();
        let w = 1.0 / elements.len() as f64;
        Ok(UnitaryRepresentation {
            model: GroupModel {
                kind: GroupKind::Finite,
                generators: generators.clone(),
                frequency: 0,
                nodes: 0,
            },
            dim,
            haar: HaarScheme {
                weights: vec![w; elements.len()],
            },
            elements,
            actors: generators,
        })
    }

    /// The 1-dimensional character `θ ↦ e^{inθ}` of the circle.
    pub fn circle_character(frequency: u32, nodes: usize) -> Result<Self, GroupError> {
        check_nodes(frequency, nodes)?;
        let elements: Vec<Matrix> = angles(nodes)
            .map(|t| Matrix::from_element(1, 1, phase(frequency, t)))
            .collect();
        Ok(Self::continuous(GroupKind::CircleCharacter, frequency, nodes, 1, elements, 1.0))
    }

    /// `θ ↦ diag(e^{inθ}, e^{−inθ})`; for `n = 0` the 1-dimensional trivial
    /// representation.
    pub fn circle(frequency: u32, nodes: usize) -> Result<Self, GroupError> {
        check_nodes(frequency, nodes)?;
        if frequency == 0 {
            let elements = vec![Matrix::identity(1, 1); nodes];
            return Ok(Self::continuous(GroupKind::Circle, 0, nodes, 1, elements, 1.0));
        }
        let elements = angles(nodes).map(|t| rotation(frequency, t)).collect();
        Ok(Self::continuous(GroupKind::Circle, frequency, nodes, 2, elements, 1.0))
    }

    /// Standard representation of `O(2)` at frequency `n`: both cosets sampled
    /// at `K` nodes, each node weighted `1/(2K)`. For `n = 0` the trivial
    /// 1-dimensional representation.
    pub fn orthogonal2(frequency: u32, nodes: usize) -> Result<Self, GroupError> {
        check_nodes(frequency, nodes)?;
        if frequency == 0 {
            let elements = vec![Matrix::identity(1, 1); 2 * nodes];
            return Ok(Self::continuous(GroupKind::Orthogonal2, 0, nodes, 1, elements, 0.5));
        }
        let j = antidiag();
        let rotations: Vec<Matrix> = angles(nodes).map(|t| rotation(frequency, t)).collect();
        let reflections: Vec<Matrix> = rotations.iter().map(|r| r * &j).collect();
        let elements = rotations.into_iter().chain(reflections).collect();
        Ok(Self::continuous(GroupKind::Orthogonal2, frequency, nodes, 2, elements, 0.5))
    }

    fn continuous(
        kind: GroupKind,
        frequency: u32,
        nodes: usize,
        dim: usize,
        elements: Vec<Matrix>,
        coset_weight: f64,
    ) -> Self {
        let w = coset_weight / nodes as f64;
        UnitaryRepresentation {
            model: GroupModel {
                kind,
                generators: Vec::new(),
                frequency,
                nodes,
            },
            dim,
            haar: HaarScheme {
                weights: vec![w; elements.len()],
            },
            actors: elements.clone(),
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_irreducible(&self, tol: &Tolerances) -> bool {
        commutant_dimension(self, tol) == 1
    }
}

fn check_nodes(frequency: u32, nodes: usize) -> Result<(), GroupError> {
    let needed = 4 * frequency as usize + 1;
    if nodes < needed {
        return Err(GroupError::InsufficientNodes {
            nodes,
            frequency,
            needed,
        });
    }
    Ok(())
}

fn angles(nodes: usize) -> impl Iterator<Item = f64> {
    (0..nodes).map(move |k| 2.0 * PI * k as f64 / nodes as f64)
}

fn phase(frequency: u32, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, frequency as f64 * theta)
}

fn rotation(frequency: u32, theta: f64) -> Matrix {
    let z = phase(frequency, theta);
    numkit::diag(&[z, z.conj()])
}

/// `J = [[0, 1], [1, 0]]`.
pub fn antidiag() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Breadth-first closure of `generators` under multiplication, identifying
/// elements within Frobenius distance `eps_dedup`. The identity comes first.
pub fn enumerate_finite_group(
    generators: &[Matrix],
    tol: &Tolerances,
    max_order: usize,
) -> Result<Vec<Matrix>, GroupError> {
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let d = first.nrows();
    for (index, g) in generators.iter().enumerate() {
        if g.nrows() != d || g.ncols() != d {
            return Err(GroupError::MixedSizes {
                index,
                expected: d,
                found: g.nrows().max(g.ncols()),
            });
        }
        numkit::check_finite(g)?;
        if !is_unitary(g, tol) {
            return Err(GroupError::NotUnitary { index });
        }
    }
    // distances in (eps_dedup, gray] are treated as ambiguous collisions
    let gray = (tol.dedup * 1e4).min(1e-3);
    let mut elements = vec![Matrix::identity(d, d)];
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let y = &x * g;
            let mut known = false;
            for e in &elements {
                let dist = (&y - e).norm();
                if dist <= tol.dedup {
                    known = true;
                    break;
                }
                if dist <= gray {
                    return Err(GroupError::DedupAmbiguous { distance: dist });
                }
            }
            if !known {
                if elements.len() >= max_order {
                    return Err(GroupError::OrderCap { cap: max_order });
                }
                elements.push(y);
            }
        }
    }
    Ok(elements)
}

/// Dimension of `{X | X π(g) = π(g) X for every element g}`.
pub fn commutant_dimension(rep: &UnitaryRepresentation, tol: &Tolerances) -> usize {
    let d = rep.dim;
    let d2 = d * d;
    let id = Matrix::identity(d, d);
    let mut system = Matrix::zeros(d2 * rep.elements.len(), d2);
    for (k, g) in rep.elements.iter().enumerate() {
        // vec(XG − GX) = (Gᵀ ⊗ I − I ⊗ G) vec(X)
        let block = g.transpose().kronecker(&id) - id.kronecker(g);
        system.view_mut((k * d2, 0), (d2, d2)).copy_from(&block);
    }
    nullspace(&system, tol)
        .map(|s| s.dim())
        .expect("representation matrices are finite")
}

/// Checks that `p` is Hermitian positive semidefinite within `eps_residual`
/// (relative to `‖P‖_F`).
pub fn check_hermitian_psd(p: &Matrix, tol: &Tolerances) -> Result<(), GroupError> {
    if !p.is_square() {
        return Err(GroupError::NotHermitianPsd {
            reason: format!("shape {}x{}", p.nrows(), p.ncols()),
        });
    }
    numkit::check_finite(p)?;
    let scale = p.norm().max(1.0);
    let defect = numkit::hermitian_defect(p);
    if defect > tol.residual * scale {
        return Err(GroupError::NotHermitianPsd {
            reason: format!("Hermitian defect {defect:.3e}"),
        });
    }
    let h = (p + p.adjoint()) * Complex64::from(0.5);
    let min = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < -tol.residual * scale {
        return Err(GroupError::NotHermitianPsd {
            reason: format!("eigenvalue {min:.3e}"),
        });
    }
    Ok(())
}

/// `Q = Σ_g w_g π(g)ᴴ P π(g)`: the Haar average of the form `⟨π(g)·, π(g)·⟩_P`.
pub fn haar_average_form(
    rep: &UnitaryRepresentation,
    p: &Matrix,
    tol: &Tolerances,
) -> Result<Matrix, GroupError> {
    if p.nrows() != rep.dim {
        return Err(GroupError::Numeric(NumError::DimensionMismatch {
            expected: rep.dim,
            found: p.nrows(),
        }));
    }
    check_hermitian_psd(p, tol)?;
    let d = rep.dim;
    Ok(rep
        .elements
        .iter()
        .zip(&rep.haar.weights)
        .fold(Matrix::zeros(d, d), |acc, (g, w)| {
            acc + (g.adjoint() * p * g) * Complex64::from(*w)
        }))
}

#[derive(Debug, Clone)]
pub struct SchurCheck {
    pub averaged: Matrix,
    /// `tr(Q) / d`.
    pub mu: Complex64,
    /// `‖Q − μ I‖_F`.
    pub deviation: f64,
}

/// Averages `P` over an irreducible representation and measures how far the
/// result is from the scalar `μ I`.
pub fn schur_scalar_check(
    rep: &UnitaryRepresentation,
    p: &Matrix,
    tol: &Tolerances,
) -> Result<SchurCheck, GroupError> {
    let commutant_dim = commutant_dimension(rep, tol);
    if commutant_dim != 1 {
        return Err(GroupError::NotIrreducible { commutant_dim });
    }
    let q = haar_average_form(rep, p, tol)?;
    Ok(scalar_deviation(q))
}

/// `μ` and `‖Q − μ I‖_F` without the irreducibility precondition.
pub fn scalar_deviation(q: Matrix) -> SchurCheck {
    let d = q.nrows();
    let mu = q.trace() / d as f64;
    let deviation = (&q - Matrix::identity(d, d) * mu).norm();
    SchurCheck {
        averaged: q,
        mu,
        deviation,
    }
}

/// Named representations with exact entries.
///
/// | name | group | matrices |
/// |------|-------|----------|
/// | `cyclic:n` | `Z/n` | generator `(ω)`, `ω = e^{2πi/n}` |
/// | `dihedraln:std2` | `D_n` | `r = diag(ω, ω̄)`, `s = J` |
/// | `quaternion8:std2` | `Q_8` | `i ↦ diag(i, −i)`, `j ↦ [[0, 1], [−1, 0]]` |
/// | `symmetric3:std2` | `S_3` | `(123) ↦ diag(ω, ω̄)`, `ω = e^{2πi/3}`, `(12) ↦ J` |
/// | `circle:n` | `U(1)` | `θ ↦ e^{inθ}` |
/// | `circle-sum:n` | `U(1)` | `θ ↦ diag(e^{inθ}, e^{−inθ})`, reducible |
/// | `o2:n` | `O(2)` | rotations `diag(e^{inθ}, e^{−inθ})`, reflections times `J` |
///
/// Here `J = [[0, 1], [1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Cyclic(u32),
    Dihedral(u32),
    Quaternion8,
    Symmetric3,
    Circle(u32),
    CircleSum(u32),
    O2(u32),
}

impl Builtin {
    pub fn is_continuous(&self) -> bool {
        matches!(self, Builtin::Circle(_) | Builtin::CircleSum(_) | Builtin::O2(_))
    }

    /// Smallest admissible quadrature node count.
    pub fn min_nodes(&self) -> usize {
        match self {
            Builtin::Circle(n) | Builtin::CircleSum(n) | Builtin::O2(n) => 4 * *n as usize + 1,
            _ => 0,
        }
    }

    /// Generators of a finite builtin (empty for continuous ones).
    pub fn generators(&self) -> Vec<Matrix> {
        let root = |n: u32| Complex64::from_polar(1.0, 2.0 * PI / n as f64);
        match *self {
            Builtin::Cyclic(n) => vec![Matrix::from_element(1, 1, root(n))],
            Builtin::Dihedral(n) => {
                let w = root(n);
                vec![numkit::diag(&[w, w.conj()]), antidiag()]
            }
            Builtin::Symmetric3 => Builtin::Dihedral(3).generators(),
            Builtin::Quaternion8 => vec![
                numkit::diag(&[numkit::I, -numkit::I]),
                Matrix::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]),
            ],
            _ => Vec::new(),
        }
    }

    /// Builds the representation; `nodes` defaults to `4n + 1` for continuous kinds.
    pub fn representation(
        &self,
        nodes: Option<usize>,
        tol: &Tolerances,
        max_order: usize,
    ) -> Result<UnitaryRepresentation, GroupError> {
        let k = nodes.unwrap_or_else(|| self.min_nodes());
        match *self {
            Builtin::Circle(n) => UnitaryRepresentation::circle_character(n, k),
            Builtin::CircleSum(n) => UnitaryRepresentation::circle(n, k),
            Builtin::O2(n) => UnitaryRepresentation::orthogonal2(n, k),
            _ => UnitaryRepresentation::finite(self.generators(), tol, max_order),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Cyclic(n) => write!(f, "cyclic:{n}"),
            Builtin::Dihedral(n) => write!(f, "dihedral{n}:std2"),
            Builtin::Quaternion8 => write!(f, "quaternion8:std2"),
            Builtin::Symmetric3 => write!(f, "symmetric3:std2"),
            Builtin::Circle(n) => write!(f, "circle:{n}"),
            Builtin::CircleSum(n) => write!(f, "circle-sum:{n}"),
            Builtin::O2(n) => write!(f, "o2:{n}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GroupError::UnknownBuiltin(s.to_string());
        let (head, tail) = s.split_once(':').ok_or_else(unknown)?;
        let number = |t: &str| t.parse::<u32>().map_err(|_| unknown());
        let parsed = match head {
            "cyclic" => Builtin::Cyclic(number(tail)?),
            "circle" => Builtin::Circle(number(tail)?),
            "circle-sum" => Builtin::CircleSum(number(tail)?),
            "o2" => Builtin::O2(number(tail)?),
            "quaternion8" if tail == "std2" => Builtin::Quaternion8,
            "symmetric3" if tail == "std2" => Builtin::Symmetric3,
            h if h.starts_with("dihedral") && tail == "std2" => {
                Builtin::Dihedral(number(&h["dihedral".len()..])?)
            }
            _ => return Err(unknown()),
        };
        match parsed {
            Builtin::Cyclic(0) | Builtin::Dihedral(0) => Err(unknown()),
            b => Ok(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{c, diag, real_matrix, I};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn d4() -> UnitaryRepresentation {
        UnitaryRepresentation::finite(vec![diag(&[I, -I]), antidiag()], &tol(), 64).unwrap()
    }

    #[test]
    fn enumerates_small_groups() {
        assert_eq!(d4().order(), 8);
        let trivial = enumerate_finite_group(&[Matrix::identity(2, 2)], &tol(), 8).unwrap();
        assert_eq!(trivial.len(), 1);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let c3 = enumerate_finite_group(&[diag(&[w, w.conj()])], &tol(), 8).unwrap();
        assert_eq!(c3.len(), 3);
    }

    #[test]
    fn enumeration_errors() {
        let gens = [diag(&[I, -I]), antidiag()];
        assert_eq!(
            enumerate_finite_group(&gens, &tol(), 5).unwrap_err(),
            GroupError::OrderCap { cap: 5 }
        );
        let not_unitary = real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            enumerate_finite_group(&[not_unitary], &tol(), 8).unwrap_err(),
            GroupError::NotUnitary { index: 0 }
        );
        // irrational rotation: never closes, hits the cap
        let r = numkit::diag(&[Complex64::from_polar(1.0, 1.0), Complex64::from_polar(1.0, -1.0)]);
        assert!(matches!(
            enumerate_finite_group(&[r], &tol(), 100),
            Err(GroupError::OrderCap { .. })
        ));
    }

    #[test]
    fn near_duplicate_elements_are_ambiguous() {
        let z = Complex64::from_polar(1.0, 1e-7);
        let g = numkit::diag(&[z, ONE]);
        assert!(matches!(
            enumerate_finite_group(&[g], &tol(), 10),
            Err(GroupError::DedupAmbiguous { .. })
        ));
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant_dimension(&d4(), &tol()), 1);
        let doubled_trivial =
            UnitaryRepresentation::finite(vec![Matrix::identity(2, 2)], &tol(), 4).unwrap();
        assert_eq!(commutant_dimension(&doubled_trivial, &tol()), 4);
        let o2 = UnitaryRepresentation::orthogonal2(1, 5).unwrap();
        assert_eq!(commutant_dimension(&o2, &tol()), 1);
        let circle = UnitaryRepresentation::circle(1, 5).unwrap();
        assert_eq!(commutant_dimension(&circle, &tol()), 2);
    }

    #[test]
    fn haar_weights_sum_to_one() {
        for rep in [
            d4(),
            UnitaryRepresentation::circle(2, 9).unwrap(),
            UnitaryRepresentation::orthogonal2(3, 13).unwrap(),
            UnitaryRepresentation::orthogonal2(0, 1).unwrap(),
        ] {
            let s: f64 = rep.haar.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-14);
            assert!(rep.haar.weights.iter().all(|w| *w > 0.0));
            assert_eq!(rep.haar.weights.len(), rep.elements.len());
        }
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert_eq!(
            UnitaryRepresentation::orthogonal2(2, 8).unwrap_err(),
            GroupError::InsufficientNodes {
                nodes: 8,
                frequency: 2,
                needed: 9
            }
        );
    }

    #[test]
    fn haar_average_examples() {
        let trivial = UnitaryRepresentation::finite(vec![Matrix::identity(1, 1)], &tol(), 1).unwrap();
        let q = haar_average_form(&trivial, &real_matrix(1, 1, &[2.0]), &tol()).unwrap();
        assert!((q[(0, 0)] - c(2.0, 0.0)).norm() < 1e-15);

        let p = diag(&[c(2.0, 0.0), ZERO]);
        let q = haar_average_form(&d4(), &p, &tol()).unwrap();
        assert!((q - Matrix::identity(2, 2)).norm() < 1e-12);

        let o2 = UnitaryRepresentation::orthogonal2(1, 5).unwrap();
        let q = haar_average_form(&o2, &p, &tol()).unwrap();
        assert!((q - Matrix::identity(2, 2)).norm() < 1e-10);
    }

    #[test]
    fn haar_average_rejects_indefinite_forms() {
        let p = diag(&[ONE, -ONE]);
        assert!(matches!(
            haar_average_form(&d4(), &p, &tol()),
            Err(GroupError::NotHermitianPsd { .. })
        ));
        let p = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            haar_average_form(&d4(), &p, &tol()),
            Err(GroupError::NotHermitianPsd { .. })
        ));
    }

    #[test]
    fn schur_examples() {
        let s = schur_scalar_check(&d4(), &diag(&[c(2.0, 0.0), ZERO]), &tol()).unwrap();
        assert!((s.mu - ONE).norm() < 1e-12);
        assert!(s.deviation <= 1e-12);

        let s = schur_scalar_check(&d4(), &Matrix::identity(2, 2), &tol()).unwrap();
        assert!((s.mu - ONE).norm() < 1e-15);
        assert!(s.deviation < 1e-15);

        let circle = UnitaryRepresentation::circle(1, 5).unwrap();
        assert_eq!(
            schur_scalar_check(&circle, &Matrix::identity(2, 2), &tol()).unwrap_err(),
            GroupError::NotIrreducible { commutant_dim: 2 }
        );
    }

    #[test]
    fn builtin_names_round_trip() {
        for name in [
            "cyclic:5",
            "dihedral4:std2",
            "dihedral7:std2",
            "quaternion8:std2",
            "symmetric3:std2",
            "circle:2",
            "circle-sum:1",
            "o2:3",
        ] {
            let b: Builtin = name.parse().unwrap();
            assert_eq!(b.to_string(), name);
        }
        for bad in ["dihedral:std2", "o2", "cyclic:0", "quaternion8:std3", "foo:1"] {
            assert!(bad.parse::<Builtin>().is_err(), "{bad}");
        }
    }

    #[test]
    fn builtin_orders() {
        let t = tol();
        let order = |b: Builtin| b.representation(None, &t, 100).unwrap().order();
        assert_eq!(order(Builtin::Dihedral(4)), 8);
        assert_eq!(order(Builtin::Dihedral(5)), 10);
        assert_eq!(order(Builtin::Quaternion8), 8);
        assert_eq!(order(Builtin::Symmetric3), 6);
        assert_eq!(order(Builtin::Cyclic(6)), 6);
        assert_eq!(order(Builtin::O2(2)), 18);
    }
}
