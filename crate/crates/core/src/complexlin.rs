//! Dense complex linear algebra for the small operators used here.
//!
//! Everything lives in row-major [`CMatrix`] values of dimension 1, 2, 4 or 16.
//! No attempt is made at large-dimension performance.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Default comparison tolerance for matrix predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Maximum number of cyclic Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries. Rejects a wrong entry count,
    /// a zero dimension, and any NaN or infinite component.
    pub fn new(dim: usize, data: Vec<Complex>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { dim, data })
    }

    pub fn from_rows(rows: &[&[Complex]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadShape {
                dim,
                len: rows.iter().map(|r| r.len()).sum(),
            });
        }
        Self::new(dim, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    /// Real-valued convenience constructor.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        CMatrix {
            dim,
            data: vec![Complex::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Outer product `v w†`.
    pub fn outer(v: &[Complex], w: &[Complex]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch(v.len(), w.len()));
        }
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for vi in v {
            for wj in w {
                data.push(vi * wj.conj());
            }
        }
        Self::new(n, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    /// Matrix product; both operands must share a dimension.
    pub fn mat_mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut out = vec![Complex::default(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(CMatrix { dim: n, data: out })
    }

    /// Kronecker product. Entry `((i,k),(j,l))` is `a(i,j)·b(k,l)` with
    /// composite indices in lexicographic order.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut data = vec![Complex::default(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + (j * m + l)] = a * other.data[k * m + l];
                    }
                }
            }
        }
        CMatrix { dim, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let n = self.dim;
        let mut data = vec![Complex::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        CMatrix { dim: n, data }
    }

    pub fn transpose(&self) -> CMatrix {
        let n = self.dim;
        let mut data = vec![Complex::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        CMatrix { dim: n, data }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &CMatrix) -> Result<Complex> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut acc = Complex::default();
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, s: Complex) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, v.len()));
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, other: &CMatrix) -> Result<CMatrix> {
        let ab = self.mat_mul(other)?;
        let ba = other.mat_mul(self)?;
        Ok(&ab - &ba)
    }

    /// Largest entrywise distance between `self` and `self†`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// Positive semidefinite: Hermitian and smallest eigenvalue ≥ −tol.
    /// Non-Hermitian input is reported as not PSD.
    pub fn is_psd(&self, tol: f64) -> bool {
        match self.hermitian_eigenvalues(tol.min(1e-12)) {
            Ok(eigs) => eigs.last().is_some_and(|&min| min >= -tol),
            Err(_) => false,
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&CMatrix::identity(self.dim))
            .is_ok_and(|d| d <= tol)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Eigenvalues of a Hermitian matrix in descending order, with
    /// multiplicity, by cyclic complex Jacobi rotations.
    ///
    /// Each rotation first removes the phase of the pivot `a_pq` with a
    /// diagonal unitary and then applies the real symmetric Jacobi rotation
    /// that annihilates it. Sweeps stop once the off-diagonal Frobenius norm
    /// drops below `tol`.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let residual = self.hermitian_residual();
        if residual > DEFAULT_TOL.max(tol) {
            return Err(Error::NotHermitian(residual));
        }
        let n = self.dim;
        let mut a = self.data.clone();
        // symmetrize so round-off in the input cannot stall convergence
        for i in 0..n {
            a[i * n + i] = c(a[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
                a[i * n + j] = avg;
                a[j * n + i] = avg.conj();
            }
        }

        let off_norm = |a: &[Complex]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s += a[i * n + j].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        let mut sweeps = 0;
        while off_norm(&a) >= tol {
            if sweeps == MAX_SWEEPS {
                return Err(Error::NotConverged {
                    sweeps,
                    off_norm: off_norm(&a),
                });
            }
            sweeps += 1;
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, n, p, q);
                }
            }
        }

        let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        eigs.sort_by(|x, y| y.total_cmp(x));
        Ok(eigs)
    }
}

/// One complex Jacobi rotation annihilating `a[p][q]` (and `a[q][p]`).
fn jacobi_rotate(a: &mut [Complex], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // U = D·R with D = diag(.., conj(phase) at q, ..), R the real rotation:
    // U_pp = c, U_pq = s, U_qp = −s·conj(phase), U_qq = c·conj(phase).
    let ph_c = phase.conj();
    let u_pp = c(cs, 0.0);
    let u_pq = c(sn, 0.0);
    let u_qp = ph_c * (-sn);
    let u_qq = ph_c * cs;

    // A ← A·U
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * u_pp + akq * u_qp;
        a[k * n + q] = akp * u_pq + akq * u_qq;
    }
    // A ← U†·A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[p * n + q] = Complex::default();
    a[q * n + p] = Complex::default();
    a[p * n + p] = c(a[p * n + p].re, 0.0);
    a[q * n + q] = c(a[q * n + q].re, 0.0);
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

/// Panics on dimension mismatch; use [`CMatrix::mat_mul`] for a fallible product.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.mat_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(c(-1.0, 0.0))
    }
}

/// Formats a real number with `sig` significant digits, trailing zeros trimmed.
fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// `a+bi` with 12 significant digits per component.
pub fn fmt_complex(z: Complex) -> String {
    let re = fmt_sig(z.re, 12);
    let im = fmt_sig(z.im, 12);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.dim, self.dim)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| fmt_complex(self[(i, j)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dimensions of the tensor factors making up a composite system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorShape {
    factor_dims: Vec<usize>,
}

impl FactorShape {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::InvalidFactors(format!(
                "factor dimensions must be positive, got {factor_dims:?}"
            )));
        }
        Ok(FactorShape { factor_dims })
    }

    /// `count` qubit factors.
    pub fn qubits(count: usize) -> Self {
        assert!(count > 0);
        FactorShape {
            factor_dims: vec![2; count],
        }
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Mixed-radix digits of `index`, most significant factor first.
    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factor_dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.factor_dims).rev() {
            *slot = index % d;
            index /= d;
        }
        digits
    }
}

/// Lifts `op` onto the listed tensor factors (0-based, strictly ascending) of
/// `shape`, acting as the identity on every other factor.
///
/// The operator is first extended as `op ⊗ I_rest` with the selected factors
/// in front, then the composite indices are permuted back to the natural
/// factor order.
pub fn embed_on_factors(op: &CMatrix, factors: &[usize], shape: &FactorShape) -> Result<CMatrix> {
    let nf = shape.factor_dims.len();
    if factors.is_empty() {
        return Err(Error::InvalidFactors("no factors selected".into()));
    }
    if factors.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidFactors(format!(
            "factor indices must be distinct and ascending, got {factors:?}"
        )));
    }
    if let Some(&bad) = factors.iter().find(|&&f| f >= nf) {
        return Err(Error::InvalidFactors(format!(
            "factor {bad} out of range for {nf} factors"
        )));
    }
    let sel_dim: usize = factors.iter().map(|&f| shape.factor_dims[f]).product();
    if op.dim() != sel_dim {
        return Err(Error::DimensionMismatch(op.dim(), sel_dim));
    }

    let rest: Vec<usize> = (0..nf).filter(|f| !factors.contains(f)).collect();
    let rest_dim: usize = rest.iter().map(|&f| shape.factor_dims[f]).product();
    let extended = op.kron(&CMatrix::identity(rest_dim));

    // Reordered shape: selected factors first, then the rest.
    let order: Vec<usize> = factors.iter().chain(&rest).copied().collect();
    let total = shape.total_dim();
    let permuted_index: Vec<usize> = (0..total)
        .map(|idx| {
            let digits = shape.digits(idx);
            order
                .iter()
                .fold(0, |acc, &f| acc * shape.factor_dims[f] + digits[f])
        })
        .collect();

    let mut out = CMatrix::zeros(total);
    for r in 0..total {
        for col in 0..total {
            out[(r, col)] = extended[(permuted_index[r], permuted_index[col])];
        }
    }
    Ok(out)
}
