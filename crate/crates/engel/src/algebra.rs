//! The Engel Lie algebra and group in exponential coordinates.
//!
//! Points carry four graded coordinates with degree weights (1,1,2,3).
//! A graded basis is described by its structure coefficients
//! `[Y1,Y2] = xi12 Y3`, `[Y1,Y3] = xi13 Y4`, `[Y2,Y3] = xi23 Y4`, with the
//! stratification condition `xi12 != 0`, `(xi13, xi23) != (0,0)`. The group
//! product is the step-3 Baker--Campbell--Hausdorff closed form, which is
//! exact over rationals: higher terms vanish identically in a step-3
//! algebra.

use crate::error::EngelError;
use crate::scalar::{Rational, Scalar};

/// Degree weights of the four graded coordinates.
pub const DEGREE_WEIGHTS: [u32; 4] = [1, 1, 2, 3];

/// The six ordered index pairs (i,j), i<j, indexing the 2-vector basis
/// `Y_i ^ Y_j`. Zero-based.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Degree of the ordered pair `(i, j)` with one-based indices `1 <= i < j <= 4`.
pub fn degree_of_multiindex(i: usize, j: usize) -> Result<u32, EngelError> {
    if i < 1 || j > 4 || i >= j {
        return Err(EngelError::InvalidIndex { i, j });
    }
    Ok(DEGREE_WEIGHTS[i - 1] + DEGREE_WEIGHTS[j - 1])
}

/// Degrees of the six 2-vector components, in `PAIRS` order: 2,3,4,3,4,5.
pub fn pair_degrees() -> [u32; 6] {
    let mut d = [0u32; 6];
    for (k, (i, j)) in PAIRS.iter().enumerate() {
        d[k] = DEGREE_WEIGHTS[*i] + DEGREE_WEIGHTS[*j];
    }
    d
}

/// Structure coefficients of a graded basis of the Engel algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureCoefficients<S: Scalar> {
    pub xi12: S,
    pub xi13: S,
    pub xi23: S,
}

impl<S: Scalar> StructureCoefficients<S> {
    pub fn new(xi12: S, xi13: S, xi23: S) -> Result<Self, EngelError> {
        if xi12.is_zero_val() {
            return Err(EngelError::InvalidStructure("xi12 must be nonzero".into()));
        }
        if xi13.is_zero_val() && xi23.is_zero_val() {
            return Err(EngelError::InvalidStructure(
                "(xi13, xi23) must not both vanish".into(),
            ));
        }
        Ok(StructureCoefficients { xi12, xi13, xi23 })
    }

    /// The standard Engel basis: `[X1,X2] = X3`, `[X1,X3] = X4`.
    pub fn standard() -> Self {
        StructureCoefficients {
            xi12: S::one(),
            xi13: S::one(),
            xi23: S::zero(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StructureCoefficients<T> {
        StructureCoefficients {
            xi12: f(&self.xi12),
            xi13: f(&self.xi13),
            xi23: f(&self.xi23),
        }
    }
}

impl StructureCoefficients<Rational> {
    pub fn to_f64(&self) -> StructureCoefficients<f64> {
        self.map(|r| r.to_f64())
    }
}

/// A point of the Engel group (equivalently of its Lie algebra) in
/// exponential coordinates of the first kind.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S: Scalar> {
    pub c: [S; 4],
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn new(c1: S, c2: S, c3: S, c4: S) -> Self {
        AlgebraElement {
            c: [c1, c2, c3, c4],
        }
    }

    pub fn zero() -> Self {
        AlgebraElement {
            c: [S::zero(), S::zero(), S::zero(), S::zero()],
        }
    }

    /// The i-th basis direction, zero-based.
    pub fn basis(i: usize) -> Self {
        let mut p = Self::zero();
        p.c[i] = S::one();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero_val())
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            c: std::array::from_fn(|i| self.c[i].clone() + other.c[i].clone()),
        }
    }

    /// Group inverse; in exponential coordinates this is the negation.
    pub fn neg(&self) -> Self {
        AlgebraElement {
            c: std::array::from_fn(|i| -self.c[i].clone()),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AlgebraElement<T> {
        AlgebraElement {
            c: std::array::from_fn(|i| f(&self.c[i])),
        }
    }

    pub fn to_f64(&self) -> AlgebraElement<f64> {
        self.map(|x| x.to_f64())
    }
}

/// Lie bracket with general structure coefficients. Bilinear and
/// antisymmetric; output lands in strata 2 and 3 only.
pub fn bracket<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    xi: &StructureCoefficients<S>,
) -> AlgebraElement<S> {
    let [x1, x2, x3, _] = &x.c;
    let [y1, y2, y3, _] = &y.c;
    let out3 = xi.xi12.clone() * (x1.clone() * y2.clone() - x2.clone() * y1.clone());
    let out4 = xi.xi13.clone() * (x1.clone() * y3.clone() - x3.clone() * y1.clone())
        + xi.xi23.clone() * (x2.clone() * y3.clone() - x3.clone() * y2.clone());
    AlgebraElement::new(S::zero(), S::zero(), out3, out4)
}

/// Group product via the Baker--Campbell--Hausdorff formula truncated at
/// step 3: `x*y = x + y + [x,y]/2 + [x,[x,y]]/12 + [y,[y,x]]/12`.
pub fn bch_product<S: Scalar>(
    x: &AlgebraElement<S>,
    y: &AlgebraElement<S>,
    xi: &StructureCoefficients<S>,
) -> AlgebraElement<S> {
    let b = bracket(x, y, xi);
    let xxy = bracket(x, &b, xi);
    let yyx = bracket(y, &b.neg(), xi);
    let mut out = x.add(y);
    for i in 2..4 {
        out.c[i] =
            out.c[i].clone() + b.c[i].scale(1, 2) + xxy.c[i].scale(1, 12) + yyx.c[i].scale(1, 12);
    }
    out
}

/// Anisotropic dilation: stratum `i` scales by `r^i`.
pub fn dilate<S: Scalar>(r: &S, x: &AlgebraElement<S>) -> Result<AlgebraElement<S>, EngelError> {
    if r.to_f64() <= 0.0 {
        return Err(EngelError::NonpositiveDilation);
    }
    let r2 = r.clone() * r.clone();
    let r3 = r2.clone() * r.clone();
    Ok(AlgebraElement::new(
        r.clone() * x.c[0].clone(),
        r.clone() * x.c[1].clone(),
        r2 * x.c[2].clone(),
        r3 * x.c[3].clone(),
    ))
}

/// A tangent 2-vector expressed in the basis `{Y_i ^ Y_j : i < j}`, with
/// component order given by [`PAIRS`].
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTwoVector<S: Scalar> {
    pub c: [S; 6],
}

impl<S: Scalar> FrameTwoVector<S> {
    pub fn new(c: [S; 6]) -> Self {
        FrameTwoVector { c }
    }

    pub fn zero() -> Self {
        FrameTwoVector {
            c: std::array::from_fn(|_| S::zero()),
        }
    }

    /// Component on `Y_i ^ Y_j` (zero-based, i < j).
    pub fn component(&self, i: usize, j: usize) -> &S {
        let k = PAIRS
            .iter()
            .position(|&(a, b)| (a, b) == (i, j))
            .expect("not an ordered pair");
        &self.c[k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero_val())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FrameTwoVector<T> {
        FrameTwoVector {
            c: std::array::from_fn(|i| f(&self.c[i])),
        }
    }

    pub fn to_f64(&self) -> FrameTwoVector<f64> {
        self.map(|x| x.to_f64())
    }

    /// Euclidean norm of the coefficient array; the graded metric makes the
    /// basis 2-vectors orthonormal.
    pub fn norm(&self) -> f64 {
        self.c
            .iter()
            .map(|x| {
                let v = x.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Degree with a caller-supplied zero test on components.
    pub fn degree_with(&self, is_zero: impl Fn(&S) -> bool) -> Result<u32, EngelError> {
        let degs = pair_degrees();
        let mut best = None;
        for k in 0..6 {
            if !is_zero(&self.c[k]) {
                best = Some(best.map_or(degs[k], |b: u32| b.max(degs[k])));
            }
        }
        best.ok_or(EngelError::ZeroTwoVector)
    }

    /// Components of the given degree, other components zeroed.
    pub fn degree_block(&self, degree: u32) -> FrameTwoVector<S> {
        let degs = pair_degrees();
        FrameTwoVector {
            c: std::array::from_fn(|k| {
                if degs[k] == degree {
                    self.c[k].clone()
                } else {
                    S::zero()
                }
            }),
        }
    }
}

impl FrameTwoVector<Rational> {
    /// Exact degree of a nonzero 2-vector.
    pub fn degree_exact(&self) -> Result<u32, EngelError> {
        self.degree_with(|c| c.is_zero_val())
    }
}

impl FrameTwoVector<f64> {
    /// Degree with the relative zero threshold `|c| < tol * (1 + |c|_max)`.
    pub fn degree_tol(&self, tol: f64) -> Result<u32, EngelError> {
        let sup = self.c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.degree_with(|c| c.abs() < tol * (1.0 + sup))
    }
}

/// Euclidean inner product of frame-coefficient vectors; the graded metric
/// makes the frame orthonormal.
pub fn inner_product(v: &[f64; 4], w: &[f64; 4]) -> f64 {
    v.iter().zip(w.iter()).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn std_xi() -> StructureCoefficients<Rational> {
        StructureCoefficients::standard()
    }

    fn elem(c: [i64; 4]) -> AlgebraElement<Rational> {
        AlgebraElement::new(rat_int(c[0]), rat_int(c[1]), rat_int(c[2]), rat_int(c[3]))
    }

    fn random_elem(rng: &mut impl Rng) -> AlgebraElement<Rational> {
        AlgebraElement::new(
            rat(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
            rat(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
            rat(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
            rat(rng.gen_range(-12..=12), rng.gen_range(1..=6)),
        )
    }

    fn random_xi(rng: &mut impl Rng) -> StructureCoefficients<Rational> {
        loop {
            let xi12 = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let xi13 = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let xi23 = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            if let Ok(xi) = StructureCoefficients::new(xi12, xi13, xi23) {
                return xi;
            }
        }
    }

    #[test]
    fn bracket_structure_relations() {
        let xi = std_xi();
        let e1 = AlgebraElement::<Rational>::basis(0);
        let e2 = AlgebraElement::basis(1);
        let e3 = AlgebraElement::basis(2);
        assert_eq!(bracket(&e1, &e2, &xi), AlgebraElement::basis(2));
        assert_eq!(bracket(&e1, &e3, &xi), AlgebraElement::basis(3));
        // xi23 = 0 in the standard basis
        assert!(bracket(&e2, &e3, &xi).is_zero());
        // antisymmetry on a fixed element
        let x = elem([3, -2, 5, 7]);
        assert!(bracket(&x, &x, &xi).is_zero());
    }

    #[test]
    fn jacobi_identity_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let xi = random_xi(&mut rng);
            let (x, y, z) = (
                random_elem(&mut rng),
                random_elem(&mut rng),
                random_elem(&mut rng),
            );
            let s = bracket(&x, &bracket(&y, &z, &xi), &xi)
                .add(&bracket(&y, &bracket(&z, &x, &xi), &xi))
                .add(&bracket(&z, &bracket(&x, &y, &xi), &xi));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn bch_known_product() {
        // e1 * e2 = (1, 1, 1/2, 1/12) in the standard basis
        let xi = std_xi();
        let p = bch_product(&AlgebraElement::basis(0), &AlgebraElement::basis(1), &xi);
        assert_eq!(
            p,
            AlgebraElement::new(rat_int(1), rat_int(1), rat(1, 2), rat(1, 12))
        );
    }

    #[test]
    fn bch_group_axioms_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let xi = random_xi(&mut rng);
            let (x, y, z) = (
                random_elem(&mut rng),
                random_elem(&mut rng),
                random_elem(&mut rng),
            );
            // identity and inverse
            assert_eq!(bch_product(&x, &AlgebraElement::zero(), &xi), x);
            assert_eq!(bch_product(&AlgebraElement::zero(), &x, &xi), x);
            assert!(bch_product(&x, &x.neg(), &xi).is_zero());
            // associativity
            let a = bch_product(&bch_product(&x, &y, &xi), &z, &xi);
            let b = bch_product(&x, &bch_product(&y, &z, &xi), &xi);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bch_first_stratum_skew_term() {
        // For first-stratum x, y the third component is xi12 (x1 y2 - x2 y1)/2.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let xi = random_xi(&mut rng);
            let mut x = random_elem(&mut rng);
            let mut y = random_elem(&mut rng);
            x.c[2] = rat_int(0);
            x.c[3] = rat_int(0);
            y.c[2] = rat_int(0);
            y.c[3] = rat_int(0);
            let p = bch_product(&x, &y, &xi);
            let skew = (x.c[0].clone() * y.c[1].clone() - x.c[1].clone() * y.c[0].clone())
                * xi.xi12.clone();
            assert_eq!(p.c[2], skew.scale(1, 2));
        }
    }

    #[test]
    fn dilation_is_group_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let xi = random_xi(&mut rng);
            let r = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
            let (x, y) = (random_elem(&mut rng), random_elem(&mut rng));
            let lhs = dilate(&r, &bch_product(&x, &y, &xi)).unwrap();
            let rhs = bch_product(&dilate(&r, &x).unwrap(), &dilate(&r, &y).unwrap(), &xi);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dilate_values() {
        let x = elem([1, 1, 1, 1]);
        assert_eq!(dilate(&rat_int(1), &x).unwrap(), x);
        assert_eq!(dilate(&rat_int(2), &x).unwrap(), elem([2, 2, 4, 8]));
        assert!(dilate(&rat_int(0), &x).is_err());
        assert!(dilate(&rat_int(-1), &x).is_err());
    }

    #[test]
    fn multiindex_degrees() {
        assert_eq!(degree_of_multiindex(1, 2).unwrap(), 2);
        assert_eq!(degree_of_multiindex(2, 3).unwrap(), 3);
        assert_eq!(degree_of_multiindex(3, 4).unwrap(), 5);
        assert!(degree_of_multiindex(2, 2).is_err());
        assert!(degree_of_multiindex(0, 3).is_err());
        assert!(degree_of_multiindex(1, 5).is_err());
    }

    #[test]
    fn two_vector_degree_cases() {
        // only the (2,3) component: degree 3
        let mut v = FrameTwoVector::<Rational>::zero();
        v.c[3] = rat_int(1);
        assert_eq!(v.degree_exact().unwrap(), 3);
        // X1^X3 - (x1/2) X1^X4 - (x3/2) X3^X4 at x1=1, x3=0: degree 4
        let mk = |x1: i64, x3: i64| {
            FrameTwoVector::new([
                rat_int(0),
                rat_int(1),
                rat(-x1, 2),
                rat_int(0),
                rat_int(0),
                rat(-x3, 2),
            ])
        };
        assert_eq!(mk(1, 0).degree_exact().unwrap(), 4);
        assert_eq!(mk(1, 1).degree_exact().unwrap(), 5);
        assert_eq!(mk(0, 0).degree_exact().unwrap(), 3);
        assert!(FrameTwoVector::<Rational>::zero().degree_exact().is_err());
    }

    #[test]
    fn two_vector_norm_orthonormality() {
        let mut v = FrameTwoVector::<f64>::zero();
        v.c[3] = 1.0; // Y2 ^ Y3
        assert!((v.norm() - 1.0).abs() < 1e-15);
        let w = FrameTwoVector::new([0.0, 1.0, -0.5, 0.0, 0.0, 0.0]);
        assert!((w.norm() - (5.0f64).sqrt() / 2.0).abs() < 1e-15);
        assert!(inner_product(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).abs() < 1e-15);
    }

    #[test]
    fn numeric_degree_tolerance() {
        let v = FrameTwoVector::new([0.0, 1.0, 1e-12, 0.0, 0.0, 0.0]);
        // the tiny (1,4) component is treated as zero at the default knob
        assert_eq!(v.degree_tol(1e-9).unwrap(), 3);
        assert_eq!(v.degree_tol(1e-14).unwrap(), 4);
    }
}
