//! Sparse multivariate polynomials over `GF(q)` and the polynomial
//!
//! `f = prod_v [ (sum over edge copies uv of g_{c(uv)}(x_u)) - alpha(v) ]`
//!
//! with one variable `x_u` per `U`-vertex. Polynomials are kept in fully
//! expanded form and never reduced modulo `x^q - x`, so coefficients are
//! those of the unreduced product.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::antifactor::AlphaAssignment;
use crate::coloring::{check_coloring, EdgeColoring};
use crate::gf::{FieldCtx, FieldElement};
use crate::graph::BipartiteMultigraph;
use crate::{Error, Result};

/// Largest `n_u` accepted by [`build_f`] and [`nonvanishing_witness`].
pub const MAX_VARIABLES: usize = 6;
/// Largest field order accepted by [`build_f`].
pub const MAX_BUILD_ORDER: u32 = 4;

/// One value per `U`-vertex.
pub type ColorAssignment = Vec<FieldElement>;

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: FieldCtx,
    arity: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl SparsePoly {
    pub fn zero(field: &FieldCtx, arity: usize) -> Self {
        SparsePoly {
            field: field.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldCtx, arity: usize, c: FieldElement) -> Self {
        Self::monomial(field, arity, vec![0; arity], c)
    }

    /// `x_i`.
    pub fn variable(field: &FieldCtx, arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(field, arity, e, FieldElement::ONE)
    }

    pub fn monomial(field: &FieldCtx, arity: usize, exponents: Vec<u32>, c: FieldElement) -> Self {
        assert_eq!(exponents.len(), arity);
        let mut p = Self::zero(field, arity);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], FieldElement)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> FieldElement {
        self.terms.get(exponents).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::Shape(format!(
                "arity {} vs {}",
                self.arity, other.arity
            )));
        }
        if self.field != other.field {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> SparsePoly {
        let mut out = Self::zero(&self.field, self.arity);
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(e, &a)| (e.clone(), self.field.mul(a, c)))
            .collect();
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut acc: HashMap<Vec<u32>, FieldElement> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(FieldElement::ZERO);
                *slot = f.add(*slot, f.mul(ca, cb));
            }
        }
        let mut out = Self::zero(f, self.arity);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.arity {
            return Err(Error::Shape(format!(
                "point of length {} for a polynomial in {} variables",
                point.len(),
                self.arity
            )));
        }
        let f = &self.field;
        Ok(self.terms.iter().fold(FieldElement::ZERO, |acc, (e, &c)| {
            let m = e
                .iter()
                .zip(point)
                .fold(c, |m, (&k, &x)| f.mul(m, f.pow(x, k as u64)));
            f.add(acc, m)
        }))
    }

    fn add_term(&mut self, e: Vec<u32>, c: FieldElement) {
        let f = &self.field;
        let sum = f.add(self.coefficient(&e), c);
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                match (vars.is_empty(), c.value()) {
                    (true, _) => c.to_string(),
                    (false, 1) => vars.join("*"),
                    (false, _) => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        write!(f, "{} over {:?}", parts.join(" + "), self.field)
    }
}

/// `g_c(x_u) = 1 - (x_u - c)^(q-1)`.
pub fn indicator_poly(field: &FieldCtx, arity: usize, u: usize, c: FieldElement) -> SparsePoly {
    let shift = SparsePoly::variable(field, arity, u)
        .sub(&SparsePoly::constant(field, arity, c))
        .expect("same shape");
    let mut power = SparsePoly::constant(field, arity, FieldElement::ONE);
    for _ in 0..field.order() - 1 {
        power = power.mul(&shift).expect("same shape");
    }
    SparsePoly::constant(field, arity, FieldElement::ONE)
        .sub(&power)
        .expect("same shape")
}

/// Expands `f` for a `q`-regular graph, a proper `q`-edge-coloring and
/// targets `alpha`. Each `alpha(v)` enters as its image in the prime
/// subfield.
pub fn build_f(
    g: &BipartiteMultigraph,
    coloring: &EdgeColoring,
    alpha: &AlphaAssignment,
    field: &FieldCtx,
) -> Result<SparsePoly> {
    let q = field.order();
    if g.n_u() > MAX_VARIABLES {
        return Err(Error::CapExceeded {
            what: "n_u",
            value: g.n_u() as u64,
            cap: MAX_VARIABLES as u64,
        });
    }
    if q > MAX_BUILD_ORDER {
        return Err(Error::CapExceeded {
            what: "q",
            value: q as u64,
            cap: MAX_BUILD_ORDER as u64,
        });
    }
    if !g.is_regular_of_degree(q as u64) {
        return Err(Error::NotRegular(q as u64));
    }
    if !check_coloring(g, coloring, q) {
        return Err(Error::InvalidArgument("edge coloring is not proper".into()));
    }
    alpha.check_shape(g.n_v(), q)?;

    let n = g.n_u();
    let mut indicators: HashMap<(usize, FieldElement), SparsePoly> = HashMap::new();
    let mut f = SparsePoly::constant(field, n, FieldElement::ONE);
    for v in 0..g.n_v() {
        let mut factor = SparsePoly::constant(field, n, field.neg(field.from_int(alpha.get(v) as i64)));
        for u in 0..n {
            for &c in coloring.colors(u, v) {
                let ind = indicators
                    .entry((u, c))
                    .or_insert_with(|| indicator_poly(field, n, u, c));
                factor = factor.add(ind)?;
            }
        }
        f = f.mul(&factor)?;
    }
    Ok(f)
}

/// Coefficient of `prod_u x_u^(q-1)`.
pub fn top_coefficient(f: &SparsePoly) -> FieldElement {
    let q = f.field().order();
    f.coefficient(&vec![q - 1; f.arity()])
}

/// The first point of `GF(q)^n`, in lexicographic order with `x_0` most
/// significant, where `f` does not vanish.
pub fn nonvanishing_witness(f: &SparsePoly) -> Result<Option<ColorAssignment>> {
    let mut found = None;
    for_each_point(f, |point, value| {
        if value.is_zero() {
            true
        } else {
            found = Some(point.to_vec());
            false
        }
    })?;
    Ok(found)
}

/// Number of points of `GF(q)^n` where `f` is nonzero.
pub fn count_nonvanishing(f: &SparsePoly) -> Result<u64> {
    let mut count = 0;
    for_each_point(f, |_, value| {
        count += !value.is_zero() as u64;
        true
    })?;
    Ok(count)
}

/// Visits every point with the value of `f`; stops when `visit` returns
/// false.
fn for_each_point(f: &SparsePoly, mut visit: impl FnMut(&[FieldElement], FieldElement) -> bool) -> Result<()> {
    let n = f.arity();
    if n > MAX_VARIABLES {
        return Err(Error::CapExceeded {
            what: "n_u",
            value: n as u64,
            cap: MAX_VARIABLES as u64,
        });
    }
    let field = f.field();
    let q = field.order();
    let mut point = vec![FieldElement::ZERO; n];
    loop {
        if !visit(&point, f.eval(&point)?) {
            return Ok(());
        }
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            let next = point[i].value() + 1;
            if next < q {
                point[i] = field.element(next)?;
                break;
            }
            point[i] = FieldElement::ZERO;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::edge_color;
    use crate::gen;

    fn fe(f: &FieldCtx, v: u32) -> FieldElement {
        f.element(v).unwrap()
    }

    #[test]
    fn product_of_linear_factors_over_gf3() {
        let f = FieldCtx::new(3).unwrap();
        let x = SparsePoly::variable(&f, 1, 0);
        let a = x.add(&SparsePoly::constant(&f, 1, fe(&f, 1))).unwrap();
        let b = x.add(&SparsePoly::constant(&f, 1, fe(&f, 2))).unwrap();
        let p = a.mul(&b).unwrap();
        // hand expansion: x^2 + 3x + 2 = x^2 + 2 mod 3
        let expected = SparsePoly::monomial(&f, 1, vec![2], f.one())
            .add(&SparsePoly::constant(&f, 1, fe(&f, 2)))
            .unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.eval(&[fe(&f, 2)]), Ok(f.zero()));
        assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let f = FieldCtx::new(3).unwrap();
        let a = SparsePoly::variable(&f, 1, 0);
        let b = SparsePoly::variable(&f, 2, 0);
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
        assert!(a.eval(&[f.one(), f.one()]).is_err());
        let other = SparsePoly::variable(&FieldCtx::new(5).unwrap(), 1, 0);
        assert!(a.add(&other).is_err());
    }

    #[test]
    fn indicator_poly_matches_pointwise_indicator() {
        for q in [2, 3, 4, 5] {
            let f = FieldCtx::new(q).unwrap();
            for i in f.elements() {
                let p = indicator_poly(&f, 1, 0, i);
                assert_eq!(p.total_degree(), Some(q as u32 - 1));
                for x in f.elements() {
                    assert_eq!(p.eval(&[x]).unwrap(), f.g_eval(i, x));
                }
            }
        }
    }

    #[test]
    fn triple_edge_polynomial_is_constant() {
        let f = FieldCtx::new(3).unwrap();
        let g = gen::k2_multi(3);
        let c = edge_color(&g, &f).unwrap();
        let one = AlphaAssignment::constant(1, 1, 3).unwrap();
        let p = build_f(&g, &c, &one, &f).unwrap();
        assert!(p.is_zero());
        assert_eq!(top_coefficient(&p), f.zero());
        let zero = AlphaAssignment::constant(0, 1, 3).unwrap();
        let p = build_f(&g, &c, &zero, &f).unwrap();
        assert_eq!(p, SparsePoly::constant(&f, 1, f.one()));
        assert_eq!(p.total_degree(), Some(0));
    }

    #[test]
    fn single_edge_polynomial_over_gf2() {
        let f = FieldCtx::new(2).unwrap();
        let g = gen::k2_multi(1);
        // a one-edge graph is 1-regular; color it by hand with color 1 in GF(2)
        let c = EdgeColoring::from_cells(1, 1, vec![vec![f.one()]]).unwrap();
        let alpha = AlphaAssignment::new(vec![0], 2).unwrap();
        // build_f requires 2-regularity, so expand the single factor directly
        let p = indicator_poly(&f, 1, 0, c.color(0, 0, 0))
            .sub(&SparsePoly::constant(&f, 1, f.from_int(alpha.get(0) as i64)))
            .unwrap();
        // 1 - (x - 1) = x over GF(2)
        assert_eq!(p, SparsePoly::variable(&f, 1, 0));
        assert_eq!(top_coefficient(&p), f.one());
        assert!(build_f(&g, &c, &alpha, &f).is_err());
    }

    #[test]
    fn doubled_c4_top_coefficient_and_witness() {
        let f = FieldCtx::new(3).unwrap();
        let g = gen::inflated_cycle(4, 3).unwrap();
        let c = edge_color(&g, &f).unwrap();
        let alpha = AlphaAssignment::constant(1, 2, 3).unwrap();
        let p = build_f(&g, &c, &alpha, &f).unwrap();
        assert!(p.total_degree().unwrap() <= 2 * 2);
        assert_eq!(top_coefficient(&p), fe(&f, 2));
        let w = nonvanishing_witness(&p).unwrap().unwrap();
        assert!(!p.eval(&w).unwrap().is_zero());
    }

    #[test]
    fn witness_edge_cases() {
        let f = FieldCtx::new(3).unwrap();
        let one = SparsePoly::constant(&f, 3, f.one());
        assert_eq!(nonvanishing_witness(&one), Ok(Some(vec![f.zero(); 3])));
        assert_eq!(nonvanishing_witness(&SparsePoly::zero(&f, 3)), Ok(None));
        assert_eq!(count_nonvanishing(&one), Ok(27));
        // x^3 - x vanishes everywhere on GF(3) although it is nonzero
        let x = SparsePoly::variable(&f, 1, 0);
        let p = x.mul(&x).unwrap().mul(&x).unwrap().sub(&x).unwrap();
        assert!(!p.is_zero());
        assert_eq!(nonvanishing_witness(&p), Ok(None));
        assert!(nonvanishing_witness(&SparsePoly::zero(&f, 7)).is_err());
    }

    #[test]
    fn build_f_guards() {
        let f = FieldCtx::new(3).unwrap();
        let g = gen::random_permutation_model(7, 3, 1);
        let c = edge_color(&g, &f).unwrap();
        let a = AlphaAssignment::constant(1, 7, 3).unwrap();
        assert!(matches!(build_f(&g, &c, &a, &f), Err(Error::CapExceeded { .. })));
        let f5 = FieldCtx::new(5).unwrap();
        let g5 = gen::k2_multi(5);
        let c5 = edge_color(&g5, &f5).unwrap();
        let a5 = AlphaAssignment::constant(1, 1, 5).unwrap();
        assert!(matches!(build_f(&g5, &c5, &a5, &f5), Err(Error::CapExceeded { .. })));
    }
}
