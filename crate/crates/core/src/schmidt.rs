//! Schmidt structure of two-particle states.
//!
//! Any real two-particle state can be written as
//! `c₊|S(φ_a)=+1⟩|S(φ_b)=+1⟩ + c₋|S(φ_a)=−1⟩|S(φ_b)=−1⟩` with `c±² = λ±`, the
//! eigenvalues of either reduced density matrix. For Hardy states (`c_{++} = 0`)
//! `det ρ = c_{+-}²c_{-+}²`, so the two eigenvalues never coincide while all three
//! remaining coefficients are nonzero.

use serde::{Deserialize, Serialize};

use crate::golden::TAU;
use crate::hardy::{MeasurementSetup, Sign, TwoQubitState};
use crate::spinalg::{self, eig_sym2, Angle, Outcome, Side, SpinVector, SymMatrix2};

/// Tolerance on eigenvalue equality (maximal) and vanishing (product).
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Reduced density matrix of one particle, in the state's labeled basis.
pub fn reduced_density(state: &TwoQubitState, side: Side) -> SymMatrix2 {
    let c = state.table();
    match side {
        // (ρ_a)_{ii'} = Σ_j c_ij c_i'j
        Side::A => SymMatrix2::new(
            c[0][0] * c[0][0] + c[0][1] * c[0][1],
            c[0][0] * c[1][0] + c[0][1] * c[1][1],
            c[1][0] * c[1][0] + c[1][1] * c[1][1],
        ),
        // (ρ_b)_{jj'} = Σ_i c_ij c_ij'
        Side::B => SymMatrix2::new(
            c[0][0] * c[0][0] + c[1][0] * c[1][0],
            c[0][0] * c[0][1] + c[1][0] * c[1][1],
            c[0][1] * c[0][1] + c[1][1] * c[1][1],
        ),
    }
}

/// Schmidt basis directions and coefficient signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtAngles {
    pub phi_a: Angle,
    pub phi_b: Angle,
    /// Signs of `(c₊, c₋)`.
    pub sign_pattern: (Sign, Sign),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtForm {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `None` when `λ₊ = λ₋`: the Schmidt basis is then not unique.
    pub angles: Option<SchmidtAngles>,
    /// Basis labels `(θ_a, θ_b)` of the decomposed state.
    pub basis: (Angle, Angle),
}

impl SchmidtForm {
    pub fn degenerate(&self) -> bool {
        self.angles.is_none()
    }

    /// Rebuilds the state over the `(θ_a, θ_b)` basis. `None` for degenerate forms.
    pub fn reconstruct(&self) -> Option<TwoQubitState> {
        self.angles.map(|a| {
            schmidt_state(
                self.lambda_plus,
                self.lambda_minus,
                a.phi_a,
                a.phi_b,
                a.sign_pattern,
                self.basis,
            )
        })
    }
}

fn schmidt_state(
    lambda_plus: f64,
    lambda_minus: f64,
    phi_a: Angle,
    phi_b: Angle,
    signs: (Sign, Sign),
    (basis_a, basis_b): (Angle, Angle),
) -> TwoQubitState {
    let cp = signs.0.value() * lambda_plus.max(0.0).sqrt();
    let cm = signs.1.value() * lambda_minus.max(0.0).sqrt();
    let ap = spinalg::eigenvector(basis_a, phi_a, Outcome::Plus);
    let am = spinalg::eigenvector(basis_a, phi_a, Outcome::Minus);
    let bp = spinalg::eigenvector(basis_b, phi_b, Outcome::Plus);
    let bm = spinalg::eigenvector(basis_b, phi_b, Outcome::Minus);
    let mut c = [[0.0; 2]; 2];
    for i in Outcome::BOTH {
        for j in Outcome::BOTH {
            c[i.index()][j.index()] =
                cp * ap.component(i) * bp.component(j) + cm * am.component(i) * bm.component(j);
        }
    }
    TwoQubitState::from_table(c, basis_a, basis_b)
}

/// Candidate directions `θ ± 2·arccos(f)` for an eigenvector with up-component `f`.
fn angle_candidates(reference: Angle, v: SpinVector) -> [Angle; 2] {
    let delta = Angle::from_radians(2.0 * v.up().clamp(-1.0, 1.0).acos());
    [reference + delta, reference - delta]
}

/// Schmidt decomposition of `state`.
///
/// `λ±` are the eigenvalues of `ρ_a`. Each Schmidt direction is only fixed up to the
/// branch `θ ± 2·arccos f₊`, so every combination of branches and coefficient signs
/// is rebuilt and the one closest to the input amplitudes is kept (first minimum,
/// i.e. `+` branches preferred on ties).
pub fn decompose(state: &TwoQubitState) -> SchmidtForm {
    let (basis_a, basis_b) = state.basis();
    let eig = eig_sym2(reduced_density(state, Side::A));
    let basis = (basis_a, basis_b);
    if eig.degenerate {
        return SchmidtForm {
            lambda_plus: eig.lambda_plus,
            lambda_minus: eig.lambda_minus,
            angles: None,
            basis,
        };
    }

    // partner vector of |S(φ_a)=+1⟩ on particle b
    let c = state.table();
    let u = eig.v_plus;
    let w = SpinVector::normalize(
        u.up() * c[0][0] + u.down() * c[1][0],
        u.up() * c[0][1] + u.down() * c[1][1],
    )
    .expect("leading Schmidt vector is nonzero for a normalized state");

    let target = state.as_array();
    let mut best: Option<(f64, SchmidtAngles)> = None;
    for phi_a in angle_candidates(basis_a, u) {
        for phi_b in angle_candidates(basis_b, w) {
            for sp in [Sign::Positive, Sign::Negative] {
                for sm in [Sign::Positive, Sign::Negative] {
                    let rebuilt = schmidt_state(
                        eig.lambda_plus,
                        eig.lambda_minus,
                        phi_a,
                        phi_b,
                        (sp, sm),
                        basis,
                    );
                    let residual = rebuilt
                        .as_array()
                        .iter()
                        .zip(target)
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max);
                    if best.is_none_or(|(r, _)| residual < r) {
                        let angles = SchmidtAngles {
                            phi_a,
                            phi_b,
                            sign_pattern: (sp, sm),
                        };
                        best = Some((residual, angles));
                    }
                }
            }
        }
    }

    SchmidtForm {
        lambda_plus: eig.lambda_plus,
        lambda_minus: eig.lambda_minus,
        angles: best.map(|(_, a)| a),
        basis,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntanglementKind {
    Product,
    Partial,
    Maximal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementClass {
    pub kind: EntanglementKind,
    /// `2|c₊c₋| = 2√(λ₊λ₋)`, which equals `2|c_{+-}c_{-+}|` for states with `c_{++} = 0`.
    pub concurrence_like: f64,
}

pub fn classify(form: &SchmidtForm) -> EntanglementClass {
    let kind = if (form.lambda_plus - form.lambda_minus).abs() <= CLASSIFY_TOL {
        EntanglementKind::Maximal
    } else if form.lambda_minus.abs() <= CLASSIFY_TOL {
        EntanglementKind::Product
    } else {
        EntanglementKind::Partial
    };
    EntanglementClass {
        kind,
        concurrence_like: 2.0 * (form.lambda_plus * form.lambda_minus).max(0.0).sqrt(),
    }
}

/// Closed-form eigenvectors `(f±, g±)` of `ρ_a = ρ_b` for the golden Hardy state
/// (all coefficients positive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenEigenvectors {
    pub f_plus: f64,
    pub g_plus: f64,
    pub f_minus: f64,
    pub g_minus: f64,
}

impl GoldenEigenvectors {
    pub fn plus(&self) -> SpinVector {
        SpinVector::normalize(self.f_plus, self.g_plus).expect("nonzero")
    }

    pub fn minus(&self) -> SpinVector {
        SpinVector::normalize(self.f_minus, self.g_minus).expect("nonzero")
    }
}

/// Surd form:
/// `f± = (2 − √5 ± √(6√5 − 13)) / D±`, `g± = √(10√5 − 22) / D±`,
/// `D± = √(12√5 − 26 ∓ 2√(106√5 − 237))`.
pub fn golden_eigenvectors() -> GoldenEigenvectors {
    let r5 = 5f64.sqrt();
    let root = (6.0 * r5 - 13.0).sqrt();
    let inner = 2.0 * (106.0 * r5 - 237.0).sqrt();
    let den_plus = (12.0 * r5 - 26.0 - inner).sqrt();
    let den_minus = (12.0 * r5 - 26.0 + inner).sqrt();
    let g_num = (10.0 * r5 - 22.0).sqrt();
    GoldenEigenvectors {
        f_plus: (2.0 - r5 + root) / den_plus,
        g_plus: g_num / den_plus,
        f_minus: (2.0 - r5 - root) / den_minus,
        g_minus: g_num / den_minus,
    }
}

/// Same eigenvectors written in powers of τ:
/// `f± = (−τ⁻³ ± r) / D±`, `g± = 2τ^{-5/2} / D±`, `r = √(1 − 4τ⁻⁴)`,
/// `D± = √(2 − 8τ⁻⁴ ∓ 2τ⁻³ r)`.
pub fn golden_eigenvectors_tau_form() -> GoldenEigenvectors {
    let r = (1.0 - 4.0 * TAU.powi(-4)).sqrt();
    let t3 = TAU.powi(-3);
    let den_plus = (2.0 - 8.0 * TAU.powi(-4) - 2.0 * t3 * r).sqrt();
    let den_minus = (2.0 - 8.0 * TAU.powi(-4) + 2.0 * t3 * r).sqrt();
    let g_num = 2.0 * TAU.powf(-2.5);
    GoldenEigenvectors {
        f_plus: (-t3 + r) / den_plus,
        g_plus: g_num / den_plus,
        f_minus: (-t3 - r) / den_minus,
        g_minus: g_num / den_minus,
    }
}

/// Left-hand sides of the four Hardy conditions for the product state
/// `|S(φ_a)=−1⟩|S(φ_b)=−1⟩`, as amplitude factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductConditions {
    /// `[sin(δ_a/2)sin(δ_b/2), cos(δ_a/2)cos(δ_b′/2), cos(δ_a′/2)cos(δ_b/2), cos(δ_a′/2)cos(δ_b′/2)]`
    pub lhs: [f64; 4],
    /// The first three vanish and the fourth does not.
    pub compatible: bool,
}

pub const PRODUCT_TOL: f64 = 1e-12;

/// Tests whether a product state could satisfy the Hardy conditions.
/// `δ_x = θ_x − φ_x` for each of the four directions.
pub fn product_state_conditions(
    phi_a: Angle,
    phi_b: Angle,
    setup: &MeasurementSetup,
) -> ProductConditions {
    let (sa, ca) = (setup.theta_a() - phi_a).half_sin_cos();
    let (sb, cb) = (setup.theta_b() - phi_b).half_sin_cos();
    let (_, cap) = (setup.theta_a_prime() - phi_a).half_sin_cos();
    let (_, cbp) = (setup.theta_b_prime() - phi_b).half_sin_cos();
    let lhs = [sa * sb, ca * cbp, cap * cb, cap * cbp];
    let compatible = lhs[..3].iter().all(|x| x.abs() <= PRODUCT_TOL) && lhs[3].abs() > PRODUCT_TOL;
    ProductConditions { lhs, compatible }
}
