//! Fixed-size complex linear algebra for Dirac spinors.
//!
//! Gamma matrices are built in the Dirac–Pauli representation with metric
//! signature (+,−,−,−): `γ⁰ = diag(1,1,−1,−1)`, `γ^k = [[0, σ_k], [−σ_k, 0]]`.
//! Lower-index matrices follow `γ₀ = γ⁰`, `γ_k = −γ^k`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::sync::OnceLock;

pub use num_complex::Complex64 as Complex;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Minkowski metric diagonal, signature (+,−,−,−).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Value of a Dirac spinor at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor4(pub [Complex; 4]);

impl Spinor4 {
    pub const fn new(c: [Complex; 4]) -> Self {
        Spinor4(c)
    }

    pub const fn zero() -> Self {
        Spinor4([ZERO; 4])
    }

    /// Builds a spinor from `(re, im)` pairs.
    pub fn from_parts(parts: [(f64, f64); 4]) -> Self {
        Spinor4(parts.map(|(re, im)| Complex::new(re, im)))
    }

    pub fn components(&self) -> &[Complex; 4] {
        &self.0
    }

    /// Euclidean norm `sqrt(Σ|ψ_k|²)`.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest component modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, k: Complex) -> Self {
        Spinor4(self.0.map(|c| c * k))
    }

    pub fn conj(&self) -> Self {
        Spinor4(self.0.map(|c| c.conj()))
    }

    /// Plain (non-conjugating) dot product `Σ a_k b_k`.
    pub fn dot(&self, other: &Spinor4) -> Complex {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Index<usize> for Spinor4 {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.0[i]
    }
}

impl IndexMut<usize> for Spinor4 {
    fn index_mut(&mut self, i: usize) -> &mut Complex {
        &mut self.0[i]
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Spinor4 {
    type Output = Spinor4;
    fn neg(self) -> Spinor4 {
        Spinor4(self.0.map(|c| -c))
    }
}

impl Mul<Complex> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, k: Complex) -> Spinor4 {
        self.scale(k)
    }
}

impl Mul<f64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, k: f64) -> Spinor4 {
        Spinor4(self.0.map(|c| c * k))
    }
}

impl fmt::Display for Spinor4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

/// 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4C(pub [[Complex; 4]; 4]);

impl Matrix4C {
    pub const fn zero() -> Self {
        Matrix4C([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 4])
    }

    pub fn diag(d: [Complex; 4]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    /// Assembles a matrix from four 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: [[Complex; 2]; 2], b: [[Complex; 2]; 2], c: [[Complex; 2]; 2], d: [[Complex; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a[i][j];
                m.0[i][j + 2] = b[i][j];
                m.0[i + 2][j] = c[i][j];
                m.0[i + 2][j + 2] = d[i][j];
            }
        }
        m
    }

    pub fn dagger(&self) -> Self {
        Matrix4C(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].conj())))
    }

    pub fn transpose(&self) -> Self {
        Matrix4C(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn scale(&self, k: Complex) -> Self {
        Matrix4C(self.0.map(|row| row.map(|c| c * k)))
    }

    pub fn trace(&self) -> Complex {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &Matrix4C) -> Self {
        *self * *other + *other * *self
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * v.0[j]).sum()))
    }
}

impl Add for Matrix4C {
    type Output = Matrix4C;
    fn add(self, rhs: Matrix4C) -> Matrix4C {
        Matrix4C(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for Matrix4C {
    type Output = Matrix4C;
    fn sub(self, rhs: Matrix4C) -> Matrix4C {
        Matrix4C(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

impl Neg for Matrix4C {
    type Output = Matrix4C;
    fn neg(self) -> Matrix4C {
        self.scale(-ONE)
    }
}

impl Mul for Matrix4C {
    type Output = Matrix4C;
    fn mul(self, rhs: Matrix4C) -> Matrix4C {
        Matrix4C(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

impl Mul<Spinor4> for Matrix4C {
    type Output = Spinor4;
    fn mul(self, v: Spinor4) -> Spinor4 {
        self.apply(&v)
    }
}

impl Mul<Spinor4> for &Matrix4C {
    type Output = Spinor4;
    fn mul(self, v: Spinor4) -> Spinor4 {
        self.apply(&v)
    }
}

/// Which index placement builds `γ = γ₀ + iγ₁γ₂γ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexConvention {
    /// Subscript reading: `γ₀ + iγ₁γ₂γ₃` with `γ_k = −γ^k`.
    Lower,
    /// Superscripts: `γ⁰ + iγ¹γ²γ³`.
    Upper,
}

impl IndexConvention {
    pub const ALL: [IndexConvention; 2] = [IndexConvention::Lower, IndexConvention::Upper];

    pub fn name(self) -> &'static str {
        match self {
            IndexConvention::Lower => "lower",
            IndexConvention::Upper => "upper",
        }
    }
}

/// Shipped default for the degeneracy matrix. Both placements pass the
/// `Ψ†γΨ = 0` self-test on the closed-form family; the subscript
/// form is kept.
pub const DEFAULT_CONVENTION: IndexConvention = IndexConvention::Lower;

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub upper: [Matrix4C; 4],
    pub lower: [Matrix4C; 4],
    /// `γ = γ₀ + iγ₁γ₂γ₃` under `convention`.
    pub gamma_deg: Matrix4C,
    pub convention: IndexConvention,
}

impl GammaSet {
    /// Matrix used in the transpose condition `Ψᵀγ₂Ψ ≠ 0`.
    pub fn gamma2_lower(&self) -> &Matrix4C {
        &self.lower[2]
    }
}

fn pauli() -> [[[Complex; 2]; 2]; 3] {
    let c = |re: f64, im: f64| Complex::new(re, im);
    [
        [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
    ]
}

/// Dirac–Pauli gammas with the default degeneracy-matrix convention.
pub fn make_gammas() -> GammaSet {
    make_gammas_with(DEFAULT_CONVENTION)
}

pub fn make_gammas_with(convention: IndexConvention) -> GammaSet {
    let z = [[ZERO; 2]; 2];
    let id2 = [[ONE, ZERO], [ZERO, ONE]];
    let neg = |m: [[Complex; 2]; 2]| m.map(|row| row.map(|c| -c));

    let g0 = Matrix4C::from_blocks(id2, z, z, neg(id2));
    let [s1, s2, s3] = pauli();
    let gk = |s: [[Complex; 2]; 2]| Matrix4C::from_blocks(z, s, neg(s), z);
    let upper = [g0, gk(s1), gk(s2), gk(s3)];
    let lower = [upper[0], -upper[1], -upper[2], -upper[3]];

    let src = match convention {
        IndexConvention::Lower => &lower,
        IndexConvention::Upper => &upper,
    };
    let gamma_deg = src[0] + (src[1] * src[2] * src[3]).scale(I);

    GammaSet {
        upper,
        lower,
        gamma_deg,
        convention,
    }
}

/// Process-wide gamma set with the default convention.
pub fn gammas() -> &'static GammaSet {
    static GAMMAS: OnceLock<GammaSet> = OnceLock::new();
    GAMMAS.get_or_init(make_gammas)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinearMode {
    /// `left† M right`
    Dagger,
    /// `leftᵀ M right`, no conjugation.
    Transpose,
}

pub fn bilinear(left: &Spinor4, m: &Matrix4C, right: &Spinor4, mode: BilinearMode) -> Complex {
    let mr = m.apply(right);
    match mode {
        BilinearMode::Dagger => left.conj().dot(&mr),
        BilinearMode::Transpose => left.dot(&mr),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spinor(rng: &mut impl Rng) -> Spinor4 {
        Spinor4(std::array::from_fn(|_| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }))
    }

    #[test]
    fn gamma0_is_diagonal_signature() {
        let g = make_gammas();
        let expect = Matrix4C::diag([ONE, ONE, -ONE, -ONE]);
        assert_eq!(g.upper[0], expect);
        assert_eq!(g.upper[0] * g.upper[0], Matrix4C::identity());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn clifford_relations_hold() {
        let g = make_gammas();
        for mu in 0..4 {
            for nu in mu..4 {
                let ac = g.upper[mu].anticommutator(&g.upper[nu]);
                let expect = if mu == nu {
                    Matrix4C::identity().scale(Complex::new(2.0 * METRIC[mu], 0.0))
                } else {
                    Matrix4C::zero()
                };
                assert!((ac - expect).max_abs() <= 1e-14, "mu={mu} nu={nu}");
            }
        }
    }

    #[test]
    fn hermiticity_profile() {
        let g = make_gammas();
        assert_eq!(g.upper[0].dagger(), g.upper[0]);
        for k in 1..4 {
            assert_eq!(g.upper[k].dagger(), -g.upper[k]);
        }
    }

    #[test]
    fn lower_index_sign_flip() {
        let g = make_gammas();
        assert_eq!(g.lower[0], g.upper[0]);
        for k in 1..4 {
            assert_eq!(g.lower[k], -g.upper[k]);
        }
    }

    // Brute-force matrix arithmetic, frozen: both placements give a
    // traceless nilpotent γ of rank 2.
    #[test]
    fn gamma_deg_profile_frozen() {
        let c = |re: f64| Complex::new(re, 0.0);
        let lower = make_gammas_with(IndexConvention::Lower).gamma_deg;
        let expect_lower = Matrix4C([
            [c(1.), c(0.), c(-1.), c(0.)],
            [c(0.), c(1.), c(0.), c(-1.)],
            [c(1.), c(0.), c(-1.), c(0.)],
            [c(0.), c(1.), c(0.), c(-1.)],
        ]);
        assert!((lower - expect_lower).max_abs() < 1e-15);
        let upper = make_gammas_with(IndexConvention::Upper).gamma_deg;
        let expect_upper = Matrix4C([
            [c(1.), c(0.), c(1.), c(0.)],
            [c(0.), c(1.), c(0.), c(1.)],
            [c(-1.), c(0.), c(-1.), c(0.)],
            [c(0.), c(-1.), c(0.), c(-1.)],
        ]);
        assert!((upper - expect_upper).max_abs() < 1e-15);
        for m in [lower, upper] {
            assert!(m.trace().norm() < 1e-15);
            assert!((m * m).max_abs() < 1e-15);
        }
    }

    #[test]
    fn bilinear_zero_left() {
        let g = make_gammas();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_spinor(&mut rng);
        for mode in [BilinearMode::Dagger, BilinearMode::Transpose] {
            assert_eq!(bilinear(&Spinor4::zero(), &g.gamma_deg, &r, mode), ZERO);
        }
    }

    #[test]
    fn bilinear_linearity() {
        let g = make_gammas();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let (l1, l2, r1, r2) = (
                random_spinor(&mut rng),
                random_spinor(&mut rng),
                random_spinor(&mut rng),
                random_spinor(&mut rng),
            );
            let a = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let m = &g.upper[2];
            for mode in [BilinearMode::Dagger, BilinearMode::Transpose] {
                let lhs = bilinear(&l1, m, &(r1 + r2.scale(a)), mode);
                let rhs = bilinear(&l1, m, &r1, mode) + a * bilinear(&l1, m, &r2, mode);
                assert!((lhs - rhs).norm() < 1e-12);
            }
            let left = l1 + l2.scale(a);
            let dag = bilinear(&left, m, &r1, BilinearMode::Dagger);
            let dag_expect =
                bilinear(&l1, m, &r1, BilinearMode::Dagger) + a.conj() * bilinear(&l2, m, &r1, BilinearMode::Dagger);
            assert!((dag - dag_expect).norm() < 1e-12);
            let tr = bilinear(&left, m, &r1, BilinearMode::Transpose);
            let tr_expect =
                bilinear(&l1, m, &r1, BilinearMode::Transpose) + a * bilinear(&l2, m, &r1, BilinearMode::Transpose);
            assert!((tr - tr_expect).norm() < 1e-12);
        }
    }

    #[test]
    fn product_associative_and_dagger_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rand_m = || {
            Matrix4C(std::array::from_fn(|_| {
                std::array::from_fn(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            }))
        };
        let (a, b, c) = (rand_m(), rand_m(), rand_m());
        assert!(((a * b) * c - a * (b * c)).max_abs() < 1e-14);
        assert_eq!(a.dagger().dagger(), a);
    }
}
