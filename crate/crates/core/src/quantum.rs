//! Quantum states and projective measurements.
//!
//! States are either [`PureState`] vectors or [`DensityMatrix`] values.
//! Measurements are [`Pvm`]s; every observable used in this crate squares
//! to the identity, so its spectral projectors are simply `(I ± O)/2` and no
//! general eigenvector solver is needed.

use rand::Rng;
use serde::Serialize;

use crate::complexlin::{c, CMatrix, Complex, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Minimum outcome probability for which collapse is defined.
pub const COLLAPSE_EPS: f64 = 1e-12;

pub fn sigma_0() -> CMatrix {
    CMatrix::identity(2)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn sigma_y() -> CMatrix {
    CMatrix::new(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// The four single-qubit Pauli matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => sigma_0(),
            Pauli::X => sigma_x(),
            Pauli::Y => sigma_y(),
            Pauli::Z => sigma_z(),
        }
    }
}

/// Unit vector in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::NotNormalized(0.0));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { amplitudes })
    }

    /// Standard basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![Complex::default(); dim];
        amplitudes[k] = c(1.0, 0.0);
        PureState { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState { amplitudes }
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let overlap: Complex = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }
}

fn vector_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `(|00⟩ + |11⟩)/√2`, basis order `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn bell_pair() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    PureState {
        amplitudes: vec![c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)],
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let herm = mat.hermitian_residual();
        if herm > DEFAULT_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "Hermitian residual {herm:e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DEFAULT_TOL || tr.im.abs() > DEFAULT_TOL {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        if !mat.is_psd(DEFAULT_TOL) {
            return Err(Error::NotDensityMatrix("not positive semidefinite".into()));
        }
        Ok(DensityMatrix { mat })
    }

    /// The pure state `v v†`.
    pub fn from_pure(v: &PureState) -> Self {
        DensityMatrix {
            mat: CMatrix::outer(v.amplitudes(), v.amplitudes()).unwrap(),
        }
    }

    /// `I/n`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: CMatrix::identity(dim).scale(c(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: self.mat.kron(&other.mat),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// `vv†` for a normalized `v`.
pub fn density_from_pure(v: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(v)
}

/// Hermitian involution: eigenvalues in `{+1, −1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    op: CMatrix,
}

impl DichotomicObservable {
    pub fn new(op: CMatrix) -> Result<Self> {
        let herm = op.hermitian_residual();
        if herm > DEFAULT_TOL {
            return Err(Error::NotDichotomic(format!("Hermitian residual {herm:e}")));
        }
        let sq = op.mat_mul(&op)?;
        let inv = sq.max_abs_diff(&CMatrix::identity(op.dim()))?;
        if inv > DEFAULT_TOL {
            return Err(Error::NotDichotomic(format!("O² − I residual {inv:e}")));
        }
        Ok(DichotomicObservable { op })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `Tr(O ρ)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self.op.trace_of_product(rho.matrix())?.re)
    }
}

/// Projection-valued measurement with real outcome labels, kept in
/// ascending label order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pvm {
    elements: Vec<(f64, CMatrix)>,
}

impl Pvm {
    /// Validates that every projector is Hermitian and idempotent and that
    /// the projectors sum to the identity.
    pub fn new(mut elements: Vec<(f64, CMatrix)>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidFactors("measurement has no outcomes".into()));
        }
        elements.sort_by(|a, b| a.0.total_cmp(&b.0));
        if elements.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::NotDichotomic("duplicate outcome label".into()));
        }
        let dim = elements[0].1.dim();
        let mut sum = CMatrix::zeros(dim);
        for (label, p) in &elements {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
            let herm = p.hermitian_residual();
            let idem = p.mat_mul(p)?.max_abs_diff(p)?;
            if herm > DEFAULT_TOL || idem > DEFAULT_TOL {
                return Err(Error::NotDichotomic(format!(
                    "projector for outcome {label} is not an orthogonal projection"
                )));
            }
            sum = &sum + p;
        }
        if !sum.is_identity(DEFAULT_TOL) {
            return Err(Error::NotDichotomic("projectors do not sum to I".into()));
        }
        Ok(Pvm { elements })
    }

    /// `{+1: (I+O)/2, −1: (I−O)/2}`.
    pub fn from_dichotomic(o: &DichotomicObservable) -> Self {
        let id = CMatrix::identity(o.dim());
        let half = c(0.5, 0.0);
        let plus = (&id + o.matrix()).scale(half);
        let minus = (&id - o.matrix()).scale(half);
        Pvm {
            elements: vec![(-1.0, minus), (1.0, plus)],
        }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.dim()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = f64> + '_ {
        self.elements.iter().map(|(a, _)| *a)
    }

    pub fn projector(&self, outcome: f64) -> Result<&CMatrix> {
        self.elements
            .iter()
            .find(|(a, _)| *a == outcome)
            .map(|(_, p)| p)
            .ok_or(Error::UnknownOutcome(outcome))
    }

    pub fn elements(&self) -> &[(f64, CMatrix)] {
        &self.elements
    }
}

pub fn pvm_from_dichotomic(o: &DichotomicObservable) -> Pvm {
    Pvm::from_dichotomic(o)
}

fn clamp_probability(p: f64) -> f64 {
    if p < 0.0 {
        0.0
    } else {
        p
    }
}

/// Outcome probabilities `Tr(P(a) ρ)` in ascending label order.
pub fn measure_probs(m: &Pvm, rho: &DensityMatrix) -> Result<Vec<(f64, f64)>> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(m.dim(), rho.dim()));
    }
    m.elements
        .iter()
        .map(|(a, p)| Ok((*a, clamp_probability(p.trace_of_product(rho.matrix())?.re))))
        .collect()
}

/// Post-measurement state `P(a) ρ P(a) / Tr(P(a) ρ)`.
pub fn collapse(m: &Pvm, rho: &DensityMatrix, outcome: f64) -> Result<DensityMatrix> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(m.dim(), rho.dim()));
    }
    let p = m.projector(outcome)?;
    let prob = p.trace_of_product(rho.matrix())?.re;
    if prob <= COLLAPSE_EPS {
        return Err(Error::ZeroProbabilityOutcome {
            outcome,
            probability: prob,
        });
    }
    let post = p
        .mat_mul(rho.matrix())?
        .mat_mul(p)?
        .scale(c(1.0 / prob, 0.0));
    DensityMatrix::new(post)
}

/// Inverse-CDF draw over `(label, probability)` pairs in the given order.
fn draw_outcome<R: Rng + ?Sized>(probs: &[(f64, f64)], rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    let mut cum = 0.0;
    for &(a, p) in probs {
        cum += p;
        if u < cum {
            return a;
        }
    }
    // round-off left u above the total; fall back to the last possible outcome
    probs
        .iter()
        .rev()
        .find(|(_, p)| *p > COLLAPSE_EPS)
        .map(|(a, _)| *a)
        .expect("measurement has no outcome with positive probability")
}

/// Draws an outcome and returns it with the collapsed state.
pub fn sample_measurement<R: Rng + ?Sized>(
    m: &Pvm,
    rho: &DensityMatrix,
    rng: &mut R,
) -> Result<(f64, DensityMatrix)> {
    let probs = measure_probs(m, rho)?;
    let outcome = draw_outcome(&probs, rng);
    Ok((outcome, collapse(m, rho, outcome)?))
}

/// Outcome probabilities `‖P(a) ψ‖²` for a pure state.
pub fn measure_probs_pure(m: &Pvm, psi: &PureState) -> Result<Vec<(f64, f64)>> {
    m.elements
        .iter()
        .map(|(a, p)| {
            let projected = p.apply(psi.amplitudes())?;
            Ok((*a, vector_norm(&projected).powi(2)))
        })
        .collect()
}

/// Post-measurement pure state `P(a) ψ / ‖P(a) ψ‖`.
pub fn collapse_pure(m: &Pvm, psi: &PureState, outcome: f64) -> Result<PureState> {
    let projected = m.projector(outcome)?.apply(psi.amplitudes())?;
    let norm = vector_norm(&projected);
    if norm * norm <= COLLAPSE_EPS {
        return Err(Error::ZeroProbabilityOutcome {
            outcome,
            probability: norm * norm,
        });
    }
    let inv = c(1.0 / norm, 0.0);
    PureState::new(projected.into_iter().map(|z| z * inv).collect())
}

/// Pure-state counterpart of [`sample_measurement`]; same outcome law and
/// the same draw from `rng`.
pub fn sample_measurement_pure<R: Rng + ?Sized>(
    m: &Pvm,
    psi: &PureState,
    rng: &mut R,
) -> Result<(f64, PureState)> {
    let probs = measure_probs_pure(m, psi)?;
    let outcome = draw_outcome(&probs, rng);
    Ok((outcome, collapse_pure(m, psi, outcome)?))
}

/// Which tensor factor of a two-qubit system to transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial transpose of a 2⊗2 operator on the chosen factor.
pub fn partial_transpose(rho: &DensityMatrix, factor: Subsystem) -> Result<CMatrix> {
    partial_transpose_matrix(rho.matrix(), factor)
}

pub(crate) fn partial_transpose_matrix(m: &CMatrix, factor: Subsystem) -> Result<CMatrix> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch(m.dim(), 4));
    }
    let mut out = CMatrix::zeros(4);
    // row (i,k), column (j,l) in lexicographic order
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let (si, sk, sj, sl) = match factor {
                        Subsystem::First => (j, k, i, l),
                        Subsystem::Second => (i, l, j, k),
                    };
                    out[(2 * i + k, 2 * j + l)] = m[(2 * si + sk, 2 * sj + sl)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues (descending) of the second-factor partial transpose.
pub fn partial_transpose_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    partial_transpose(rho, Subsystem::Second)?.hermitian_eigenvalues(1e-14)
}

/// Partial-transpose witness: entangled iff the partial transpose has an
/// eigenvalue below `−DEFAULT_TOL`. Decisive for two qubits.
pub fn is_entangled_2q(rho: &DensityMatrix) -> Result<bool> {
    let spectrum = partial_transpose_spectrum(rho)?;
    Ok(spectrum.last().is_some_and(|&min| min < -DEFAULT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{rng_for, Stream};

    fn rho_example() -> DensityMatrix {
        DensityMatrix::new(
            CMatrix::new(2, vec![c(0.25, 0.), c(0., 0.25), c(0., -0.25), c(0.75, 0.)]).unwrap(),
        )
        .unwrap()
    }

    fn plus() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h, 0.), c(h, 0.)]).unwrap()
    }

    fn obs(m: CMatrix) -> DichotomicObservable {
        DichotomicObservable::new(m).unwrap()
    }

    #[test]
    fn pauli_table() {
        let i = c(0., 1.);
        let m_i = c(0., -1.);
        let cases = [
            (Pauli::X, Pauli::Y, sigma_z().scale(i)),
            (Pauli::X, Pauli::Z, sigma_y().scale(m_i)),
            (Pauli::Y, Pauli::X, sigma_z().scale(m_i)),
            (Pauli::Y, Pauli::Z, sigma_x().scale(i)),
            (Pauli::Z, Pauli::X, sigma_y().scale(i)),
            (Pauli::Z, Pauli::Y, sigma_x().scale(m_i)),
        ];
        for (a, b, expect) in cases {
            assert_eq!(&a.matrix() * &b.matrix(), expect, "{a:?}{b:?}");
        }
        for p in Pauli::ALL {
            assert_eq!(&p.matrix() * &p.matrix(), sigma_0());
        }
    }

    #[test]
    fn density_from_pure_examples() {
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        assert_eq!(
            zero.matrix(),
            &CMatrix::from_real(2, &[1., 0., 0., 0.]).unwrap()
        );
        let p = DensityMatrix::from_pure(&plus());
        assert!(
            p.matrix()
                .max_abs_diff(&CMatrix::from_real(2, &[0.5; 4]).unwrap())
                .unwrap()
                < 1e-15
        );
        let b = DensityMatrix::from_pure(&bell_pair());
        let mut expect = vec![0.0; 16];
        for idx in [0, 3, 12, 15] {
            expect[idx] = 0.5;
        }
        assert!(
            b.matrix()
                .max_abs_diff(&CMatrix::from_real(4, &expect).unwrap())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        assert!(matches!(
            PureState::new(vec![c(1., 0.), c(1., 0.)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn pvm_projectors_match_displayed_decompositions() {
        let mu = Pvm::from_dichotomic(&obs(sigma_x()));
        assert_eq!(
            mu.projector(1.0).unwrap(),
            &CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap()
        );
        assert_eq!(
            mu.projector(-1.0).unwrap(),
            &CMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap()
        );
        let nu = Pvm::from_dichotomic(&obs(sigma_y()));
        let nu_plus =
            CMatrix::new(2, vec![c(0.5, 0.), c(0., -0.5), c(0., 0.5), c(0.5, 0.)]).unwrap();
        let nu_minus =
            CMatrix::new(2, vec![c(0.5, 0.), c(0., 0.5), c(0., -0.5), c(0.5, 0.)]).unwrap();
        assert_eq!(nu.projector(1.0).unwrap(), &nu_plus);
        assert_eq!(nu.projector(-1.0).unwrap(), &nu_minus);

        let id = Pvm::from_dichotomic(&obs(sigma_0()));
        assert!(id.projector(1.0).unwrap().is_identity(0.0));
        assert!(id.projector(-1.0).unwrap().is_zero(0.0));
        assert!(Pvm::new(id.elements().to_vec()).is_ok());
    }

    #[test]
    fn dichotomic_rejects_non_involution() {
        let half_z = sigma_z().scale(c(0.5, 0.));
        assert!(matches!(
            DichotomicObservable::new(half_z),
            Err(Error::NotDichotomic(_))
        ));
        let n = CMatrix::from_real(2, &[0., 1., 0., 0.]).unwrap();
        assert!(DichotomicObservable::new(n).is_err());
    }

    #[test]
    fn measurement_of_worked_qubit_example() {
        let mu = Pvm::from_dichotomic(&obs(sigma_x()));
        let rho = rho_example();
        assert!(
            (rho.matrix()
                .trace_of_product(mu.projector(1.0).unwrap())
                .unwrap()
                .re
                - 0.5)
                .abs()
                < 1e-15
        );
        let probs = measure_probs(&mu, &rho).unwrap();
        assert_eq!(probs.len(), 2);
        for (_, p) in &probs {
            assert!((p - 0.5).abs() < 1e-12);
        }
        for a in [1.0, -1.0] {
            let post = collapse(&mu, &rho, a).unwrap();
            assert!(
                post.matrix()
                    .max_abs_diff(mu.projector(a).unwrap())
                    .unwrap()
                    < 1e-12
            );
        }
    }

    #[test]
    fn eigenstate_measurement() {
        let z = Pvm::from_dichotomic(&obs(sigma_z()));
        let zero = DensityMatrix::from_pure(&PureState::basis(2, 0));
        assert_eq!(
            measure_probs(&z, &zero).unwrap(),
            vec![(-1.0, 0.0), (1.0, 1.0)]
        );
        assert_eq!(collapse(&z, &zero, 1.0).unwrap(), zero);
        assert!(matches!(
            collapse(&z, &zero, -1.0),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
        assert!(matches!(
            collapse(&z, &zero, 3.0),
            Err(Error::UnknownOutcome(_))
        ));
        let mut rng = rng_for(1, Stream::Measurement);
        for _ in 0..100 {
            assert_eq!(sample_measurement(&z, &zero, &mut rng).unwrap().0, 1.0);
        }
    }

    #[test]
    fn product_measurement_on_plus_plus() {
        let xy = obs(sigma_x().kron(&sigma_y()));
        let beta = Pvm::from_dichotomic(&xy);
        let u = plus();
        let uu = u.kron(&u);
        let rho = DensityMatrix::from_pure(&uu);
        let probs = measure_probs(&beta, &rho).unwrap();
        for (_, p) in &probs {
            assert!((p - 0.5).abs() < 1e-12);
        }
        let half = 0.5;
        // ν(1) projects onto (|0⟩ + i|1⟩)/√2, which sends u to (1−i, 1+i)/2
        let expected = [
            (1.0, vec![c(half, -half), c(half, half)]),
            (-1.0, vec![c(half, half), c(half, -half)]),
        ];
        for (a, bob) in expected {
            let target = u.kron(&PureState::new(bob).unwrap());
            let post = collapse(&beta, &rho, a).unwrap();
            let target_rho = DensityMatrix::from_pure(&target);
            assert!(post.matrix().max_abs_diff(target_rho.matrix()).unwrap() < 1e-9);
            let post_pure = collapse_pure(&beta, &uu, a).unwrap();
            assert!((post_pure.fidelity(&target).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_equals_product_of_factor_pvms() {
        let mu = Pvm::from_dichotomic(&obs(sigma_x()));
        let nu = Pvm::from_dichotomic(&obs(sigma_y()));
        let beta = Pvm::from_dichotomic(&obs(sigma_x().kron(&sigma_y())));
        let pk = |a: f64, b: f64| mu.projector(a).unwrap().kron(nu.projector(b).unwrap());
        let b_plus = &pk(1.0, 1.0) + &pk(-1.0, -1.0);
        let b_minus = &pk(1.0, -1.0) + &pk(-1.0, 1.0);
        assert!(beta.projector(1.0).unwrap().max_abs_diff(&b_plus).unwrap() < 1e-15);
        assert!(
            beta.projector(-1.0)
                .unwrap()
                .max_abs_diff(&b_minus)
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn sampling_frequency_and_determinism() {
        let mu = Pvm::from_dichotomic(&obs(sigma_x()));
        let rho = rho_example();
        let n = 100_000;
        let draw = |seed| {
            let mut rng = rng_for(seed, Stream::Measurement);
            (0..n)
                .map(|_| sample_measurement(&mu, &rho, &mut rng).unwrap().0)
                .collect::<Vec<_>>()
        };
        let a = draw(99);
        let plus_count = a.iter().filter(|&&x| x == 1.0).count() as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((plus_count / n as f64 - 0.5).abs() < 3.0 * sigma);
        assert_eq!(a[..1000], draw(99)[..1000]);
    }

    #[test]
    fn bell_pair_properties() {
        let b = bell_pair();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(b.amplitudes(), &[c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)]);
        assert!((vector_norm(b.amplitudes()) - 1.0).abs() < 1e-15);
        assert!(is_entangled_2q(&DensityMatrix::from_pure(&b)).unwrap());
    }

    #[test]
    fn partial_transpose_examples() {
        let zz = DensityMatrix::from_pure(&PureState::basis(4, 0));
        for f in [Subsystem::First, Subsystem::Second] {
            assert_eq!(&partial_transpose(&zz, f).unwrap(), zz.matrix());
        }
        let mixed = DensityMatrix::maximally_mixed(4);
        assert_eq!(
            &partial_transpose(&mixed, Subsystem::Second).unwrap(),
            mixed.matrix()
        );
        assert!(!is_entangled_2q(&mixed).unwrap());
        assert!(!is_entangled_2q(&zz).unwrap());

        let bell = DensityMatrix::from_pure(&bell_pair());
        let spectrum = partial_transpose_spectrum(&bell).unwrap();
        assert!((spectrum[3] + 0.5).abs() < 1e-9);
        // first-factor and second-factor transposes are transposes of each other
        let pt1 = partial_transpose(&bell, Subsystem::First).unwrap();
        let pt2 = partial_transpose(&bell, Subsystem::Second).unwrap();
        assert_eq!(pt1, pt2.transpose());

        let single = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            partial_transpose(&single, Subsystem::First),
            Err(Error::DimensionMismatch(2, 4))
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(sigma_z()).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(CMatrix::from_real(2, &[0.5, 1.0, 0.0, 0.5]).unwrap()).is_err());
    }
}
