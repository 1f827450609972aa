//! Structure layer for su(2,1): the distinguished basis, brackets, the trace
//! pairing, dual forms and coadjoint actions.
//!
//! Matrices are 3x3 over `Complex<T>` with `T` either [`crate::Q`] (exact) or
//! `f64`. Membership in su(2,1) means `X^* I21 + I21 X = 0` and `tr X = 0`
//! with `I21 = diag(1, 1, -1)`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex;
use num_traits::{FromPrimitive, Num, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::null_space_real;
use crate::{C64, Q};

/// Scalars usable for exact or floating structure computations.
pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Num + Signed + FromPrimitive {}
impl<T: Clone + Debug + PartialEq + PartialOrd + Num + Signed + FromPrimitive> Scalar for T {}

pub(crate) fn frac<T: Scalar>(n: i64, d: i64) -> T {
    T::from_i64(n).unwrap() / T::from_i64(d).unwrap()
}

/// An element of su(2,1) (or its complexification) as a 3x3 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T: Scalar = f64> {
    pub entries: [[Complex<T>; 3]; 3],
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn zero() -> Self {
        let z = Complex::<T>::zero();
        AlgebraElement { entries: [[z.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), z.clone()], [z.clone(), z.clone(), z]] }
    }

    fn from_fn(f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut x = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                x.entries[i][j] = f(i, j);
            }
        }
        x
    }

    /// Matrix unit `E_kl` (1-based indices).
    pub fn unit(k: usize, l: usize) -> Self {
        Self::from_fn(|i, j| if i + 1 == k && j + 1 == l { Complex::new(T::one(), T::zero()) } else { Complex::zero() })
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].clone() * c.clone())
    }

    pub fn scale_real(&self, c: &T) -> Self {
        self.scale(&Complex::new(c.clone(), T::zero()))
    }

    fn times_i(&self) -> Self {
        self.scale(&Complex::new(T::zero(), T::one()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = Complex::<T>::zero();
            for k in 0..3 {
                acc = acc + self.entries[i][k].clone() * other.entries[k][j].clone();
            }
            acc
        })
    }

    pub fn trace(&self) -> Complex<T> {
        self.entries[0][0].clone() + self.entries[1][1].clone() + self.entries[2][2].clone()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|c| c.is_zero())
    }

    /// `X^* I21 + I21 X` and `tr X`; both vanish exactly for members.
    pub fn membership_defect(&self) -> (Self, Complex<T>) {
        let i21 = i21::<T>();
        let lhs = self.adjoint().matmul(&i21) + i21.matmul(self);
        (lhs, self.trace())
    }

    /// Exact membership test (meaningful for rational entries).
    pub fn is_member(&self) -> bool {
        let (d, t) = self.membership_defect();
        d.is_zero() && t.is_zero()
    }

    // Distinguished basis.

    /// `H = i diag(1, -1, 0)`.
    pub fn h() -> Self {
        (Self::unit(1, 1) - Self::unit(2, 2)).times_i()
    }
    /// `Z = i diag(1, 1, -2)`.
    pub fn z() -> Self {
        (Self::unit(1, 1) + Self::unit(2, 2) - Self::unit(3, 3).scale_real(&frac(2, 1))).times_i()
    }
    pub fn f() -> Self {
        Self::unit(1, 2) - Self::unit(2, 1)
    }
    pub fn v() -> Self {
        (Self::unit(1, 2) + Self::unit(2, 1)).times_i()
    }
    /// `W = (i/3) diag(1, -2, 1) = H/2 - Z/6`.
    pub fn w() -> Self {
        (Self::unit(1, 1) - Self::unit(2, 2).scale_real(&frac(2, 1)) + Self::unit(3, 3)).times_i().scale_real(&frac(1, 3))
    }
    pub fn s() -> Self {
        Self::unit(1, 3) + Self::unit(3, 1)
    }
    pub fn e1() -> Self {
        Self::unit(2, 1) - Self::unit(1, 2) - Self::unit(2, 3) - Self::unit(3, 2)
    }
    pub fn e1p() -> Self {
        (Self::unit(2, 3) - Self::unit(1, 2) - Self::unit(2, 1) - Self::unit(3, 2)).times_i()
    }
    /// `E2 = i (2E11 - 2E13 + 2E31 - 2E33)`.
    pub fn e2() -> Self {
        (Self::unit(1, 1) - Self::unit(1, 3) + Self::unit(3, 1) - Self::unit(3, 3)).times_i().scale_real(&frac(2, 1))
    }
}

fn i21<T: Scalar>() -> AlgebraElement<T> {
    AlgebraElement::unit(1, 1) + AlgebraElement::unit(2, 2) - AlgebraElement::unit(3, 3)
}

impl<T: Scalar> Add for AlgebraElement<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].clone() + o.entries[i][j].clone())
    }
}

impl<T: Scalar> Sub for AlgebraElement<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].clone() - o.entries[i][j].clone())
    }
}

impl<T: Scalar> Neg for AlgebraElement<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.entries[i][j].clone())
    }
}

impl<T: Scalar> Mul<T> for AlgebraElement<T> {
    type Output = Self;
    fn mul(self, c: T) -> Self {
        self.scale_real(&c)
    }
}

impl AlgebraElement<f64> {
    pub fn to_matrix3(&self) -> Matrix3<C64> {
        Matrix3::from_fn(|i, j| self.entries[i][j])
    }

    pub fn from_matrix3(m: &Matrix3<C64>) -> Self {
        Self::from_fn(|i, j| m[(i, j)])
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl AlgebraElement<Q> {
    pub fn to_f64(&self) -> AlgebraElement<f64> {
        use num_traits::ToPrimitive;
        AlgebraElement::from_fn(|i, j| {
            let c = &self.entries[i][j];
            C64::new(c.re.to_f64().unwrap(), c.im.to_f64().unwrap())
        })
    }
}

/// Commutator `XY - YX`.
pub fn bracket<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> AlgebraElement<T> {
    x.matmul(y) - y.matmul(x)
}

/// Trace pairing `<X, Y> = -tr(XY)/2`.
pub fn pairing<T: Scalar>(x: &AlgebraElement<T>, y: &AlgebraElement<T>) -> Complex<T> {
    let t = x.matmul(y).trace();
    Complex::new(t.re * frac(-1, 2), t.im * frac(-1, 2))
}

/// Basis of su(2,1): `H, F, V, Z` span the compact part `k`, followed by
/// `S, i(E13 - E31), E23 + E32, i(E23 - E32)` spanning `p`.
pub fn g_basis<T: Scalar>() -> Vec<AlgebraElement<T>> {
    type A<T> = AlgebraElement<T>;
    vec![
        A::h(),
        A::f(),
        A::v(),
        A::z(),
        A::s(),
        (A::unit(1, 3) - A::unit(3, 1)).times_i(),
        A::unit(2, 3) + A::unit(3, 2),
        (A::unit(2, 3) - A::unit(3, 2)).times_i(),
    ]
}

pub const G_BASIS_NAMES: [&str; 8] = ["H", "F", "V", "Z", "S", "P2", "P3", "P4"];

/// Basis of the Borel algebra `b`: `W, S, E1, E1', E2`.
pub fn b_basis<T: Scalar>() -> Vec<AlgebraElement<T>> {
    type A<T> = AlgebraElement<T>;
    vec![A::w(), A::s(), A::e1(), A::e1p(), A::e2()]
}

/// Basis of `b1 = a + n`: `S, E1, E1', E2`.
pub fn b1_basis<T: Scalar>() -> Vec<AlgebraElement<T>> {
    b_basis().into_iter().skip(1).collect()
}

/// Diagonal of the Gram matrix of [`g_basis`] under [`pairing`]; the basis
/// is orthogonal, which the tests check.
pub fn g_gram_diagonal<T: Scalar>() -> Vec<T> {
    g_basis::<T>().iter().map(|x| pairing(x, x).re).collect()
}

/// Coordinates of a member of su(2,1) in [`g_basis`].
pub fn g_coordinates<T: Scalar>(y: &AlgebraElement<T>) -> Vec<T> {
    g_basis::<T>().iter().map(|x| pairing(x, y).re / pairing(x, x).re).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    GStar,
    BStar,
    B1Star,
}

impl BasisTag {
    pub fn dim(self) -> usize {
        match self {
            BasisTag::GStar => 8,
            BasisTag::BStar => 5,
            BasisTag::B1Star => 4,
        }
    }
}

/// A linear form given by its values on the basis behind `tag`.
///
/// For `b*` and `b1*` these are the coefficients against the dual bases
/// `(W*, S*, E1*, E1'*, E2*)` and `(S*, E1*, E1'*, E2*)`. For `g*` the first
/// four entries are the coefficients against `H*, F*, V*, Z*`, where
/// `H*(Y) = -tr(HY)/2` and `Z*(Y) = -tr(ZY)/6`, i.e. `H* = H` and `Z* = Z/3`
/// under the pairing; the last four are the values on the `p` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DualForm<T: Scalar = f64> {
    pub tag: BasisTag,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> DualForm<T> {
    pub fn new(tag: BasisTag, coeffs: Vec<T>) -> Self {
        assert_eq!(coeffs.len(), tag.dim(), "coefficient count does not match {tag:?}");
        DualForm { tag, coeffs }
    }

    pub fn zero(tag: BasisTag) -> Self {
        DualForm { tag, coeffs: vec![T::zero(); tag.dim()] }
    }

    /// `f0H H* + f0Z Z*`, a form on the compact Cartan subalgebra.
    pub fn cartan(f0h: T, f0z: T) -> Self {
        let mut f = Self::zero(BasisTag::GStar);
        f.coeffs[0] = f0h;
        f.coeffs[3] = f0z;
        f
    }

    /// `w W* + s S* + x E1* + y E1'* + z E2*`.
    pub fn b(w: T, s: T, x: T, y: T, z: T) -> Self {
        DualForm::new(BasisTag::BStar, vec![w, s, x, y, z])
    }

    /// `s S* + x E1* + y E1'* + z E2*`.
    pub fn b1(s: T, x: T, y: T, z: T) -> Self {
        DualForm::new(BasisTag::B1Star, vec![s, x, y, z])
    }

    /// Value of a `g*` form on a member of su(2,1).
    pub fn eval_g(&self, y: &AlgebraElement<T>) -> T {
        assert_eq!(self.tag, BasisTag::GStar);
        g_coordinates(y).into_iter().zip(&self.coeffs).fold(T::zero(), |acc, (c, f)| acc + c * f.clone())
    }
}

impl DualForm<Q> {
    pub fn to_f64(&self) -> DualForm<f64> {
        use num_traits::ToPrimitive;
        DualForm { tag: self.tag, coeffs: self.coeffs.iter().map(|c| c.to_f64().unwrap()).collect() }
    }
}

/// The element `X_f` with `f(Y) = -tr(X_f Y)/2`.
pub fn killing_dualize<T: Scalar>(f: &DualForm<T>) -> AlgebraElement<T> {
    assert_eq!(f.tag, BasisTag::GStar);
    g_basis::<T>()
        .into_iter()
        .zip(&f.coeffs)
        .fold(AlgebraElement::zero(), |acc, (x, c)| {
            let g = pairing(&x, &x).re;
            acc + x.scale_real(&(c.clone() / g))
        })
}

/// Inverse of [`killing_dualize`].
pub fn killing_undualize<T: Scalar>(x: &AlgebraElement<T>) -> DualForm<T> {
    let coeffs = g_basis::<T>().iter().map(|b| pairing(x, b).re).collect();
    DualForm { tag: BasisTag::GStar, coeffs }
}

/// Coadjoint action of a group element given as a matrix:
/// `(g.f)(Y) = f(g^{-1} Y g)`, i.e. `X_{g.f} = g X_f g^{-1}`.
pub fn coadjoint_g(g: &Matrix3<C64>, f: &DualForm<f64>) -> DualForm<f64> {
    let x = killing_dualize(f).to_matrix3();
    let ginv = g.try_inverse().expect("group element is invertible");
    killing_undualize(&AlgebraElement::from_matrix3(&(g * x * ginv)))
}

/// `(g.f)(Y) = f(g^{-1} Y g)` evaluated directly, without forming `g X_f g^{-1}`.
/// This stays accurate when `g` is large but `g^{-1} Y g` is not.
/// `g_inv` must be the inverse of `g`; it is passed in because the elements
/// used here have closed-form inverses that are more accurate than LU.
pub fn coadjoint_g_eval(g: &Matrix3<C64>, g_inv: &Matrix3<C64>, f: &DualForm<f64>, y: &AlgebraElement<f64>) -> f64 {
    let ym = g_inv * y.to_matrix3() * g;
    f.eval_g(&AlgebraElement::from_matrix3(&ym))
}

/// Restrictions of basis elements of `b` to coordinates in `g`; row `i` is
/// the `g`-coordinate vector of the `i`-th element of [`b_basis`].
pub fn b_in_g<T: Scalar>() -> Vec<Vec<T>> {
    b_basis::<T>().iter().map(g_coordinates).collect()
}

/// Element `exp(wW) exp(xE1 + yE1') exp(zE2) exp(sS)` of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElementB {
    pub w: f64,
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupElementB {
    pub fn identity() -> Self {
        GroupElementB { w: 0.0, s: 0.0, x: 0.0, y: 0.0, z: 0.0 }
    }

    /// The 3x3 matrix of the element.
    pub fn matrix(&self) -> Matrix3<C64> {
        let i = C64::i();
        let m = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            (i * self.w / 3.0).exp(),
            (-i * 2.0 * self.w / 3.0).exp(),
            (i * self.w / 3.0).exp(),
        ));
        let xm = (AlgebraElement::e1() * self.x + AlgebraElement::e1p() * self.y).to_matrix3();
        let n = Matrix3::identity() + xm + xm * xm * C64::from(0.5);
        let e = Matrix3::identity() + AlgebraElement::<f64>::e2().to_matrix3() * C64::from(self.z);
        let (ch, sh) = (C64::from(self.s.cosh()), C64::from(self.s.sinh()));
        let a = Matrix3::new(ch, 0.0.into(), sh, 0.0.into(), 1.0.into(), 0.0.into(), sh, 0.0.into(), ch);
        m * n * e * a
    }

    pub fn transform(&self) -> BTransform<f64> {
        BTransform { cos_w: self.w.cos(), sin_w: self.w.sin(), dil: self.s.exp(), x: self.x, y: self.y, z: self.z }
    }

    /// Group product in parameters.
    pub fn compose(&self, other: &GroupElementB) -> GroupElementB {
        let t = self.transform().compose(&other.transform());
        GroupElementB { w: self.w + other.w, s: self.s + other.s, x: t.x, y: t.y, z: t.z }
    }

    pub fn inverse(&self) -> GroupElementB {
        let t = self.transform().inverse();
        GroupElementB { w: -self.w, s: -self.s, x: t.x, y: t.y, z: t.z }
    }
}

/// An element of `B` with the rotation stored as `(cos w, sin w)` and the
/// dilation as `e^s`, so that exact rational elements are available.
#[derive(Debug, Clone, PartialEq)]
pub struct BTransform<T: Scalar> {
    pub cos_w: T,
    pub sin_w: T,
    pub dil: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

type Mat5<T> = [[T; 5]; 5];

fn mat5_identity<T: Scalar>() -> Mat5<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() }))
}

fn mat5_mul<T: Scalar>(a: &Mat5<T>, b: &Mat5<T>) -> Mat5<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..5).fold(T::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone())))
}

impl<T: Scalar> BTransform<T> {
    pub fn identity() -> Self {
        BTransform { cos_w: T::one(), sin_w: T::zero(), dil: T::one(), x: T::zero(), y: T::zero(), z: T::zero() }
    }

    /// Group product in parameters: move the rotation left, the dilation right.
    pub fn compose(&self, o: &Self) -> Self {
        let (c2, s2) = (o.cos_w.clone(), o.sin_w.clone());
        // R(-w2) applied to X1
        let x1 = c2.clone() * self.x.clone() + s2.clone() * self.y.clone();
        let y1 = c2.clone() * self.y.clone() - s2.clone() * self.x.clone();
        let l = self.dil.clone();
        let (x2, y2) = (l.clone() * o.x.clone(), l.clone() * o.y.clone());
        let omega = x1.clone() * y2.clone() - y1.clone() * x2.clone();
        BTransform {
            cos_w: self.cos_w.clone() * c2.clone() - self.sin_w.clone() * s2.clone(),
            sin_w: self.sin_w.clone() * c2 + self.cos_w.clone() * s2,
            dil: l.clone() * o.dil.clone(),
            x: x1 + x2,
            y: y1 + y2,
            z: self.z.clone() + l.clone() * l * o.z.clone() + omega / frac(2, 1),
        }
    }

    pub fn inverse(&self) -> Self {
        // g^{-1} = a(-s) e(-z) n(-X) m(-w); rewrite in normal order.
        let li = T::one() / self.dil.clone();
        let (c, s) = (self.cos_w.clone(), self.sin_w.clone());
        // n(-X) m(-w) = m(-w) n(-R(w) X)
        let xr = c.clone() * self.x.clone() - s.clone() * self.y.clone();
        let yr = s.clone() * self.x.clone() + c.clone() * self.y.clone();
        // a(-s) h(-X', -z) = h(-X'/l, -z/l^2) a(-s)
        BTransform {
            cos_w: c,
            sin_w: -s,
            dil: li.clone(),
            x: -xr * li.clone(),
            y: -yr * li.clone(),
            z: -self.z.clone() * li.clone() * li,
        }
    }

    /// Matrix of `Ad(g)` on `b` in the basis `(W, S, E1, E1', E2)`:
    /// column `j` holds the coordinates of `Ad(g) Y_j`.
    pub fn ad_matrix(&self) -> Mat5<T> {
        let m = ad_rotation(&self.cos_w, &self.sin_w);
        let n = ad_heisenberg(&self.x, &self.y);
        let e = ad_center(&self.z);
        let a = ad_dilation(&self.dil);
        mat5_mul(&mat5_mul(&m, &n), &mat5_mul(&e, &a))
    }
}

fn ad_rotation<T: Scalar>(c: &T, s: &T) -> Mat5<T> {
    let mut r = mat5_identity::<T>();
    r[2][2] = c.clone();
    r[3][2] = s.clone();
    r[2][3] = -s.clone();
    r[3][3] = c.clone();
    r
}

fn ad_heisenberg<T: Scalar>(x: &T, y: &T) -> Mat5<T> {
    let mut r = mat5_identity::<T>();
    r[2][0] = y.clone();
    r[3][0] = -x.clone();
    r[4][0] = -(x.clone() * x.clone() + y.clone() * y.clone()) / frac(2, 1);
    r[2][1] = -x.clone();
    r[3][1] = -y.clone();
    r[4][2] = -y.clone();
    r[4][3] = x.clone();
    r
}

fn ad_center<T: Scalar>(z: &T) -> Mat5<T> {
    let mut r = mat5_identity::<T>();
    r[4][1] = -z.clone() * frac(2, 1);
    r
}

fn ad_dilation<T: Scalar>(l: &T) -> Mat5<T> {
    let mut r = mat5_identity::<T>();
    r[2][2] = l.clone();
    r[3][3] = l.clone();
    r[4][4] = l.clone() * l.clone();
    r
}

/// Coadjoint action on `b*`: `(g.f)(Y) = f(Ad(g^{-1}) Y)`.
pub fn coadjoint_b_transform<T: Scalar>(g: &BTransform<T>, f: &DualForm<T>) -> DualForm<T> {
    assert_eq!(f.tag, BasisTag::BStar);
    let a = g.inverse().ad_matrix();
    let coeffs = (0..5).map(|j| (0..5).fold(T::zero(), |acc, i| acc + f.coeffs[i].clone() * a[i][j].clone())).collect();
    DualForm { tag: BasisTag::BStar, coeffs }
}

/// Coadjoint action of `g = exp(wW) exp(xE1 + yE1') exp(zE2) exp(sS)` on `b*`.
pub fn coadjoint_b(g: &GroupElementB, f: &DualForm<f64>) -> DualForm<f64> {
    coadjoint_b_transform(&g.transform(), f)
}

/// Element `exp(zeta Z) exp(phi W) exp(-(theta/2) V) exp(psi W)` of `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KElement {
    pub zeta: f64,
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl KElement {
    pub fn matrix(&self) -> Matrix3<C64> {
        let i = C64::i();
        let expw = |t: f64| {
            Matrix3::from_diagonal(&nalgebra::Vector3::new((i * t / 3.0).exp(), (-i * 2.0 * t / 3.0).exp(), (i * t / 3.0).exp()))
        };
        let expz = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            (i * self.zeta).exp(),
            (i * self.zeta).exp(),
            (-i * 2.0 * self.zeta).exp(),
        ));
        // exp(aV) = cos a + sin a V on the upper block since V^2 = -1 there.
        let a = -self.theta / 2.0;
        let (c, s) = (C64::from(a.cos()), i * a.sin());
        let z = C64::from(0.0);
        let v = Matrix3::new(c, s, z, s, c, z, z, z, C64::from(1.0));
        expz * expw(self.phi) * v * expw(self.psi)
    }

    pub fn sample<R: rand::Rng>(rng: &mut R) -> Self {
        use std::f64::consts::PI;
        KElement {
            zeta: rng.gen_range(0.0..2.0 * PI),
            phi: rng.gen_range(0.0..6.0 * PI),
            theta: rng.gen_range(0.0..2.0 * PI),
            psi: rng.gen_range(0.0..6.0 * PI),
        }
    }
}

/// Numeric kernel threshold relative to the largest singular value.
pub const KERNEL_REL_TOL: f64 = 1e-9;

/// Basis of the stabilizer `g(f) = {X : f([X, .]) = 0}`.
pub fn stabilizer_algebra(f: &DualForm<f64>) -> Vec<AlgebraElement<f64>> {
    let basis = g_basis::<f64>();
    let bf = DMatrix::from_fn(8, 8, |i, j| f.eval_g(&bracket(&basis[i], &basis[j])));
    null_space_real(&bf, KERNEL_REL_TOL)
        .into_iter()
        .map(|v| basis.iter().zip(v.iter()).fold(AlgebraElement::zero(), |acc, (x, c)| acc + x.clone() * *c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type A = AlgebraElement<Q>;

    #[test]
    fn basis_members_exact() {
        for x in g_basis::<Q>().iter().chain(b_basis::<Q>().iter()) {
            assert!(x.is_member(), "{x:?}");
        }
        assert!(!A::unit(1, 1).is_member());
    }

    #[test]
    fn w_is_half_h_minus_sixth_z() {
        assert_eq!(A::w(), A::h() * crate::q(1, 2) - A::z() * crate::q(1, 6));
    }

    #[test]
    fn gram_is_diagonal() {
        let b = g_basis::<Q>();
        for i in 0..8 {
            for j in 0..8 {
                let p = pairing(&b[i], &b[j]);
                assert!(p.im.is_zero());
                if i != j {
                    assert!(p.re.is_zero(), "{i} {j}");
                }
            }
        }
        let d: Vec<Q> = g_gram_diagonal();
        let expect: Vec<Q> = [1, 1, 1, 3, -1, -1, -1, -1].iter().map(|&n| crate::q(n, 1)).collect();
        assert_eq!(d, expect);
    }

    #[test]
    fn dualize_examples() {
        let mut h = DualForm::<Q>::zero(BasisTag::GStar);
        h.coeffs[0] = crate::q(1, 1);
        assert_eq!(killing_dualize(&h), A::h());
        let mut z = DualForm::<Q>::zero(BasisTag::GStar);
        z.coeffs[3] = crate::q(1, 1);
        assert_eq!(killing_dualize(&z), A::z() * crate::q(1, 3));
        assert!(killing_dualize(&DualForm::<Q>::zero(BasisTag::GStar)).is_zero());
    }

    #[test]
    fn group_matrix_factors() {
        let x = (AlgebraElement::e1() * 0.7 + AlgebraElement::e1p() * -1.3).to_matrix3();
        assert!((x * x * x).norm() < 1e-14);
        let e2 = AlgebraElement::<f64>::e2().to_matrix3();
        assert!((e2 * e2).norm() < 1e-14);
    }
}
