use serde::{Deserialize, Serialize};

use super::{ParityMatrix, PtError, Result};
use crate::linalg::{bilinear, conj, conj_vec, dot, eigenvalues, norm_inf, null_vector, vec_norm};
use crate::tol::EPS_PT;
use crate::{CMatrix, CVector, Complex64};

/// Eigenvalue gaps below this multiple of `‖H‖_∞` count as degenerate.
pub const DEGENERACY_GAP_REL: f64 = 1e-8;

/// A unit eigenvector whose PT norm falls below this is not PT-normalizable.
const PT_NORM_FLOOR: f64 = 1e-8;

/// Parameters of `H = [[r e^{iθ}, s], [s, r e^{−iθ}]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoLevelParams {
    pub r: f64,
    pub s: f64,
    pub theta: f64,
}

pub fn two_level_hamiltonian(p: TwoLevelParams) -> CMatrix {
    let s = Complex64::new(p.s, 0.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(p.r, p.theta),
            s,
            s,
            Complex64::from_polar(p.r, -p.theta),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtSymmetryCheck {
    pub symmetric: bool,
    /// `‖P·conj(H)·P − H‖_∞ / max(‖H‖_∞, 1)`
    pub residual: f64,
}

fn check_square(h: &CMatrix) -> Result<usize> {
    if h.nrows() != h.ncols() {
        return Err(PtError::NotSquare);
    }
    Ok(h.nrows())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(PtError::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub fn is_pt_symmetric(h: &CMatrix, parity: &ParityMatrix) -> Result<PtSymmetryCheck> {
    let n = check_square(h)?;
    check_dim(n, parity.dim())?;
    let residual = norm_inf(&(parity.conjugate(&conj(h)) - h)) / norm_inf(h).max(1.0);
    Ok(PtSymmetryCheck {
        symmetric: residual <= EPS_PT,
        residual,
    })
}

/// `‖H − Hᵀ‖_∞ / max(‖H‖_∞, 1)`; zero exactly when the PT product makes `H`
/// self-adjoint (given PT symmetry).
fn transpose_residual(h: &CMatrix) -> f64 {
    norm_inf(&(h - h.transpose())) / norm_inf(h).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Unbroken,
    Broken,
}

/// PT-invariant eigenvectors scaled to `|(φ_n, φ_n)^PT| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PtBasis {
    /// Columns in the order of the sorted eigenvalues.
    pub vectors: CMatrix,
    /// `(φ_n, φ_n)^PT` for each column.
    pub signs: Vec<i8>,
    /// 1 when the lowest eigenvector has negative PT norm, so that the label
    /// `n = index + label_offset` gives `(φ_n, φ_n)^PT = (−1)^n` at the bottom.
    pub label_offset: usize,
    /// `|(v, v)^PT|` for the unit-norm eigenvectors; small values mean the
    /// model is close to an exceptional point.
    pub pt_norms: Vec<f64>,
    pub min_gap: f64,
}

impl PtBasis {
    /// Whether every column obeys `(φ_n, φ_n)^PT = (−1)^n` under the labeling.
    pub fn alternating(&self) -> bool {
        self.signs
            .iter()
            .enumerate()
            .all(|(i, &s)| s == if (i + self.label_offset) % 2 == 0 { 1 } else { -1 })
    }

    pub fn label(&self, index: usize) -> usize {
        index + self.label_offset
    }

    pub fn vector(&self, index: usize) -> CVector {
        self.vectors.column(index).into_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted ascending by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub phase: Phase,
    /// Present for unbroken models with a nondegenerate spectrum.
    pub basis: Option<PtBasis>,
    pub notes: Vec<String>,
}

pub fn solve_spectrum(h: &CMatrix, parity: &ParityMatrix) -> Result<Spectrum> {
    let n = check_square(h)?;
    check_dim(n, parity.dim())?;
    let mut ev = eigenvalues(h).ok_or(PtError::NumericalFailure)?;
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = norm_inf(h);
    let mut notes = Vec::new();

    let max_im = ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_im > EPS_PT * scale {
        notes.push(format!("largest imaginary part {max_im:e}"));
        return Ok(Spectrum {
            eigenvalues: ev,
            phase: Phase::Broken,
            basis: None,
            notes,
        });
    }

    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_gap = min_gap.min((ev[i] - ev[j]).norm());
        }
    }
    if min_gap < DEGENERACY_GAP_REL * scale {
        notes.push(format!("eigenvalue gap {min_gap:e} below the degeneracy guard"));
        return Ok(Spectrum {
            eigenvalues: ev,
            phase: Phase::Unbroken,
            basis: None,
            notes,
        });
    }

    let mut vectors = CMatrix::zeros(n, n);
    let mut signs = Vec::with_capacity(n);
    let mut pt_norms = Vec::with_capacity(n);
    for (k, &lambda) in ev.iter().enumerate() {
        let shifted = h - CMatrix::identity(n, n) * lambda;
        let (v, _) = null_vector(&shifted).ok_or(PtError::NumericalFailure)?;
        // P·conj(v) = c·v with |c| = 1; rotating by arg(c)/2 makes v PT-invariant.
        let c = dot(&v, &parity.apply(&conj_vec(&v)));
        let v = &v * Complex64::from_polar(1.0 / vec_norm(&v), 0.5 * c.arg());
        let q = pt_inner_product(&v, &v, parity)?.re;
        pt_norms.push(q.abs());
        if q.abs() < PT_NORM_FLOOR {
            notes.push(format!(
                "eigenvector {k} has PT norm {q:e}; not PT-normalizable (exceptional point)"
            ));
            return Ok(Spectrum {
                eigenvalues: ev,
                phase: Phase::Broken,
                basis: None,
                notes,
            });
        }
        signs.push(if q > 0.0 { 1 } else { -1 });
        vectors.set_column(k, &(v / Complex64::new(q.abs().sqrt(), 0.0)));
    }
    let label_offset = usize::from(signs[0] < 0);
    let basis = PtBasis {
        vectors,
        signs,
        label_offset,
        pt_norms,
        min_gap,
    };
    if !basis.alternating() {
        notes.push(format!(
            "PT signs {:?} do not alternate; C still acts as the sign on each eigenvector",
            basis.signs
        ));
    }
    Ok(Spectrum {
        eigenvalues: ev,
        phase: Phase::Unbroken,
        basis: Some(basis),
        notes,
    })
}

/// `(ψ, φ)^PT = (P·conj ψ)ᵀ φ`.
pub fn pt_inner_product(psi: &CVector, phi: &CVector, parity: &ParityMatrix) -> Result<Complex64> {
    check_dim(parity.dim(), psi.len())?;
    check_dim(parity.dim(), phi.len())?;
    Ok(bilinear(&parity.apply(&conj_vec(psi)), phi))
}

fn construct_c(h: &CMatrix, spectrum: &Spectrum) -> Result<CMatrix> {
    if spectrum.phase == Phase::Broken {
        return Err(PtError::BrokenPhase);
    }
    let basis = spectrum.basis.as_ref().ok_or_else(|| {
        PtError::DegenerateSpectrum(spectrum.notes.join("; "))
    })?;
    let residual = transpose_residual(h);
    if residual > EPS_PT {
        return Err(PtError::NotPtSelfAdjoint { residual });
    }
    let n = h.nrows();
    let mut c = CMatrix::zeros(n, n);
    for k in 0..n {
        let v = basis.vector(k);
        c += &v * v.transpose();
    }
    Ok(c)
}

/// A PT-symmetric Hamiltonian with its parity, spectrum and (when it exists)
/// C operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PtModel {
    label: String,
    h: CMatrix,
    parity: ParityMatrix,
    two_level: Option<TwoLevelParams>,
    spectrum: Spectrum,
    c: Option<CMatrix>,
    c_unavailable: Option<String>,
}

impl PtModel {
    pub fn new(label: impl Into<String>, h: CMatrix, parity: ParityMatrix) -> Result<Self> {
        let n = check_square(&h)?;
        if n == 0 || n % 2 == 1 {
            return Err(PtError::OddDimension(n));
        }
        let check = is_pt_symmetric(&h, &parity)?;
        if !check.symmetric {
            return Err(PtError::NotPtSymmetric {
                residual: check.residual,
            });
        }
        let spectrum = solve_spectrum(&h, &parity)?;
        let (c, c_unavailable) = match construct_c(&h, &spectrum) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Ok(Self {
            label: label.into(),
            h,
            parity,
            two_level: None,
            spectrum,
            c,
            c_unavailable,
        })
    }

    /// The 2×2 family with `P` the exchange matrix.
    pub fn two_level(label: impl Into<String>, params: TwoLevelParams) -> Result<Self> {
        let mut m = Self::new(label, two_level_hamiltonian(params), ParityMatrix::exchange(2))?;
        m.two_level = Some(params);
        Ok(m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.h
    }

    pub fn parity(&self) -> &ParityMatrix {
        &self.parity
    }

    pub fn two_level_params(&self) -> Option<TwoLevelParams> {
        self.two_level
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn phase(&self) -> Phase {
        self.spectrum.phase
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.spectrum.eigenvalues
    }

    pub fn basis(&self) -> Option<&PtBasis> {
        self.spectrum.basis.as_ref()
    }

    pub fn c(&self) -> Option<&CMatrix> {
        self.c.as_ref()
    }

    /// Why no C operator exists, if none does.
    pub fn c_unavailable(&self) -> Option<&str> {
        self.c_unavailable.as_deref()
    }

    fn require_c(&self) -> Result<&CMatrix> {
        self.c.as_ref().ok_or(PtError::MissingC)
    }
}

/// `C = Σ_n φ_n φ_nᵀ` over the PT-normalized eigenvectors, so that
/// `C φ_n = (φ_n, φ_n)^PT · φ_n`.
pub fn build_c(model: &PtModel) -> Result<CMatrix> {
    construct_c(&model.h, &model.spectrum)
}

/// Residuals of the identities a C operator must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CChecks {
    /// `‖C² − I‖_∞`
    pub involution: f64,
    /// `‖CH − HC‖_∞ / max(1, ‖H‖_∞)`
    pub commutes_with_h: f64,
    /// `‖C·P − P·conj(C)‖_∞`, i.e. `[C, PT] = 0`
    pub commutes_with_pt: f64,
    /// `max_{n≠m} |(φ_n, φ_m)^PT|`
    pub pt_orthogonality: f64,
}

impl CChecks {
    pub fn max_residual(&self) -> f64 {
        self.involution
            .max(self.commutes_with_h)
            .max(self.commutes_with_pt)
            .max(self.pt_orthogonality)
    }
}

pub fn verify_c(model: &PtModel) -> Result<CChecks> {
    let c = model.require_c()?;
    let basis = model.basis().ok_or(PtError::MissingC)?;
    let n = model.dim();
    let h = &model.h;
    let p = model.parity.matrix();
    let mut pt_orthogonality: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let ip = pt_inner_product(&basis.vector(i), &basis.vector(j), &model.parity)?;
                pt_orthogonality = pt_orthogonality.max(ip.norm());
            }
        }
    }
    Ok(CChecks {
        involution: norm_inf(&(c * c - CMatrix::identity(n, n))),
        commutes_with_h: norm_inf(&(c * h - h * c)) / norm_inf(h).max(1.0),
        commutes_with_pt: norm_inf(&(c * &p - &p * conj(c))),
        pt_orthogonality,
    })
}

/// `(ψ, φ)^CPT = (C·P·conj ψ)ᵀ φ`.
pub fn cpt_inner_product(psi: &CVector, phi: &CVector, model: &PtModel) -> Result<Complex64> {
    let c = model.require_c()?;
    check_dim(model.dim(), psi.len())?;
    check_dim(model.dim(), phi.len())?;
    Ok(bilinear(&(c * model.parity.apply(&conj_vec(psi))), phi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableVerdict {
    pub operator_label: String,
    pub satisfies_condition: bool,
    /// `‖CPT·A·CPT − Aᵀ‖_∞ / max(1, ‖A‖_∞)`
    pub residual: f64,
    pub against_model: String,
}

/// Tests `CPT·A·CPT = Aᵀ`. As a matrix, `CPT·A·CPT = (CP)·conj(A)·conj(CP)`.
pub fn is_cpt_observable(a: &CMatrix, label: &str, model: &PtModel) -> Result<ObservableVerdict> {
    let c = model.require_c()?;
    check_dim(model.dim(), check_square(a)?)?;
    let cp = c * model.parity.matrix();
    let conjugated = &cp * conj(a) * conj(&cp);
    let residual = norm_inf(&(conjugated - a.transpose())) / norm_inf(a).max(1.0);
    Ok(ObservableVerdict {
        operator_label: label.to_string(),
        satisfies_condition: residual <= EPS_PT,
        residual,
        against_model: model.label.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonUniversalityDemo {
    pub operator_label: String,
    pub under_model_1: ObservableVerdict,
    pub under_model_2: ObservableVerdict,
    /// The two verdicts differ.
    pub demonstrated: bool,
}

fn ensure_c(model: &PtModel) -> Result<()> {
    if model.phase() == Phase::Broken {
        return Err(PtError::BrokenPhase);
    }
    model.require_c().map(|_| ())
}

/// Rejects model pairs where an eigenvector of the first is also one of the
/// second.
fn check_no_common_eigenvectors(m1: &PtModel, m2: &PtModel) -> Result<()> {
    let basis = m1.basis().ok_or(PtError::MissingC)?;
    let h2 = &m2.h;
    let scale = norm_inf(h2).max(1.0);
    for k in 0..m1.dim() {
        let v = basis.vector(k);
        let v = &v / Complex64::new(vec_norm(&v), 0.0);
        let hv = h2 * &v;
        let rayleigh = dot(&v, &hv);
        let residual = vec_norm(&(hv - &v * rayleigh)) / scale;
        if residual <= EPS_PT {
            return Err(PtError::CommonEigenvectors { residual });
        }
    }
    Ok(())
}

/// Evaluates the CPT observable condition for `a` under both models.
pub fn cross_model_verdicts(
    a: &CMatrix,
    label: &str,
    m1: &PtModel,
    m2: &PtModel,
) -> Result<NonUniversalityDemo> {
    check_dim(m1.dim(), m2.dim())?;
    ensure_c(m1)?;
    ensure_c(m2)?;
    check_no_common_eigenvectors(m1, m2)?;
    let under_model_1 = is_cpt_observable(a, label, m1)?;
    let under_model_2 = is_cpt_observable(a, label, m2)?;
    Ok(NonUniversalityDemo {
        operator_label: label.to_string(),
        demonstrated: under_model_1.satisfies_condition != under_model_2.satisfies_condition,
        under_model_1,
        under_model_2,
    })
}

/// `H1` is an observable for its own CPT product; checks whether it stays one
/// for the CPT product of `H2`.
pub fn non_universality_demo(m1: &PtModel, m2: &PtModel) -> Result<NonUniversalityDemo> {
    cross_model_verdicts(&m1.h, "H1", m1, m2)
}

/// `‖C(t) − P‖_∞` along `H(t) = A + i t B`.
pub fn hermitian_limit_path(
    a: &CMatrix,
    b: &CMatrix,
    parity: &ParityMatrix,
    ts: &[f64],
) -> Result<Vec<f64>> {
    let p = parity.matrix();
    ts.iter()
        .map(|&t| {
            let h = a + b * Complex64::new(0.0, t);
            let model = PtModel::new(format!("hermitian_limit(t={t})"), h, parity.clone())?;
            let c = model.require_c()?;
            Ok(norm_inf(&(c - &p)))
        })
        .collect()
}
