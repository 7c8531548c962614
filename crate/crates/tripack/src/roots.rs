//! Certified enclosures of the algebraic constants r, s and the target
//! density, obtained by sign-change bisection on their defining integer
//! polynomials.

use crate::geometry::{self, CircleSize, TriangleShape};
use crate::interval::{self, Interval, Precision};
use crate::{Error, Result};

/// Dense univariate polynomial with exact integer coefficients, ascending
/// degree order. Leading coefficient nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub coeffs: Vec<i64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<i64>) -> Self {
        assert!(coeffs.last().is_some_and(|c| *c != 0), "leading coefficient must be nonzero");
        Polynomial { coeffs }
    }

    /// Defining polynomial of r: 4r^8 - 36r^7 - 27r^6 + 162r^5 + 135r^4 - 88r^3 - 73r^2 - 14r + 1.
    pub fn r_defining() -> Self {
        Polynomial::new(vec![1, -14, -73, -88, 135, 162, -27, -36, 4])
    }

    /// Defining polynomial of s: 89s^8 + 1344s^7 + 4008s^6 - 464s^5 - 2410s^4 + 176s^3 + 296s^2 - 96s + 1.
    pub fn s_defining() -> Self {
        Polynomial::new(vec![1, -96, 296, 176, -2410, -464, 4008, 1344, 89])
    }

    /// Degree-8 polynomial with root delta/pi.
    pub fn density_defining() -> Self {
        Polynomial::new(vec![
            21526627817,
            -80069696280,
            41344255112,
            -63721188256,
            -41913015856,
            22192248320,
            -38395680512,
            11526176768,
            129777664,
        ])
    }

    /// Interval Horner evaluation.
    pub fn eval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::zero().to_precision(x.precision());
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::from_int(c);
        }
        acc
    }

    /// Certified sign of the polynomial at a point: +1, -1, or None when the
    /// evaluation enclosure contains zero.
    fn sign_at(&self, x: &Interval) -> Option<i32> {
        let v = self.eval(x);
        if v.certainly_positive() {
            Some(1)
        } else if v.certainly_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

/// Bisection with certified sign evaluation. Returns an interval of width at
/// most `width_goal` inside `bracket` on which the polynomial changes sign.
pub fn isolate_root(p: &Polynomial, bracket: &Interval, width_goal: f64) -> Result<Interval> {
    let prec = bracket.precision();
    let point = |x: f64| Interval::point(x).to_precision(prec);
    let sign_lo = p.sign_at(&point(bracket.lo_f64())).ok_or(Error::NoSignChange)?;
    let sign_hi = p.sign_at(&point(bracket.hi_f64())).ok_or(Error::NoSignChange)?;
    if sign_lo == sign_hi {
        return Err(Error::NoSignChange);
    }
    // Endpoints are kept as point intervals so the bracket can narrow below
    // f64 resolution on the software backend.
    let mut lo_iv = point(bracket.lo_f64());
    let mut hi_iv = point(bracket.hi_f64());
    loop {
        let width = (&hi_iv - &lo_iv).hi_f64();
        if width <= width_goal {
            break;
        }
        let mid = &(&lo_iv + &hi_iv) * &Interval::point(0.5);
        let m_pt = match &mid {
            Interval::F64 { .. } => point(mid.mid_f64()),
            Interval::Big(_) => mid.clone(),
        };
        match p.sign_at(&m_pt) {
            Some(sgn) if sgn == sign_lo => lo_iv = m_pt,
            Some(_) => hi_iv = m_pt,
            // Sign not certifiable at this precision: the root is within
            // evaluation noise of the midpoint; stop with the current bracket.
            None => break,
        }
    }
    Ok(lo_iv.hull(&hi_iv))
}

/// Certified enclosures of the packing constants.
#[derive(Clone, Debug)]
pub struct Constants {
    pub r: Interval,
    pub s: Interval,
    pub delta: Interval,
    pub delta_over_pi: Interval,
    pub precision: Precision,
}

/// Verdict of a self-contained check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Constants {
    /// Isolates r and s from their defining polynomials and derives the
    /// density of the target packing.
    pub fn compute(precision: Precision, width_goal: f64) -> Result<Constants> {
        let bracket = |lo: f64, hi: f64| Interval::of(lo, hi).to_precision(precision);
        let r = isolate_root(&Polynomial::r_defining(), &bracket(0.8, 0.9), width_goal)?;
        let s = isolate_root(&Polynomial::s_defining(), &bracket(0.6, 0.7), width_goal)?;
        let delta = compute_density(&r, &s)?;
        let delta_over_pi = delta.checked_div(&interval::pi(precision))?;
        Ok(Constants { r, s, delta, delta_over_pi, precision })
    }

    pub fn size_value(&self, c: CircleSize) -> Interval {
        match c {
            CircleSize::One => Interval::point(1.0).to_precision(self.precision),
            CircleSize::R => self.r.clone(),
            CircleSize::S => self.s.clone(),
        }
    }
}

/// Density of the target packing from its primitive cell: four tight
/// triangles of class {1,r,s}, one of class {1,1,s}, one of class {1,r,r};
/// the density is (sum of covered area) / (sum of triangle area).
pub fn compute_density(r: &Interval, s: &Interval) -> Result<Interval> {
    let one = Interval::point(1.0).to_precision(r.precision());
    let cell = [
        (4i64, [one.clone(), r.clone(), s.clone()]),
        (1, [one.clone(), one.clone(), s.clone()]),
        (1, [one.clone(), r.clone(), r.clone()]),
    ];
    let mut cov_sum = Interval::zero().to_precision(r.precision());
    let mut area_sum = cov_sum.clone();
    for (mult, sizes) in &cell {
        let t = TriangleShape::tight_from_values(sizes.clone())?;
        let m = Interval::from_int(*mult);
        cov_sum = &cov_sum + &(&m * &geometry::coverage(&t)?);
        area_sum = &area_sum + &(&m * &geometry::area(&t)?);
    }
    cov_sum.checked_div(&area_sum)
}

/// Sign-change certificate that delta/pi is a root of the printed degree-8
/// polynomial: the interval evaluation at the enclosure must contain zero and
/// the polynomial must have certified opposite signs at the endpoints of a
/// slightly inflated enclosure.
pub fn verify_density_polynomial(delta_over_pi: &Interval) -> Verdict {
    let p = Polynomial::density_defining();
    if !p.eval(delta_over_pi).contains_zero() {
        return Verdict::Fail;
    }
    let prec = delta_over_pi.precision();
    let inflate = (10.0 * delta_over_pi.width()).max(1e-13);
    let lo = Interval::point(delta_over_pi.lo_f64() - inflate).to_precision(prec);
    let hi = Interval::point(delta_over_pi.hi_f64() + inflate).to_precision(prec);
    match (p.sign_at(&lo), p.sign_at(&hi)) {
        (Some(a), Some(b)) if a != b => Verdict::Pass,
        _ => Verdict::Fail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::pi;

    const P192: Precision = Precision::Bits(192);

    #[test]
    fn sqrt2_bisection() {
        let p = Polynomial::new(vec![-2, 0, 1]);
        let root = isolate_root(&p, &Interval::of(1.0, 2.0), 1e-12).unwrap();
        assert!(root.contains(std::f64::consts::SQRT_2));
        assert!(root.width() <= 1e-12);
        assert!(p.eval(&root).contains_zero());
    }

    #[test]
    fn r_enclosure() {
        let r = isolate_root(&Polynomial::r_defining(), &Interval::of(0.8, 0.9).to_precision(P192), 1e-30).unwrap();
        assert!(r.contains(0.8343060428530174));
        assert!(r.width() <= 1e-30);
    }

    #[test]
    fn s_enclosure_q_bound() {
        let s = isolate_root(&Polynomial::s_defining(), &Interval::of(0.6, 0.7).to_precision(P192), 1e-30).unwrap();
        // the paper's bound q >= 0.6510501858 is the truncation of s
        assert!(s.lo_f64() > 0.6510501858);
        assert!(s.hi_f64() < 0.6510501859);
        assert!(s.contains(0.6510501858826092));
    }

    #[test]
    fn no_sign_change_detected() {
        let p = Polynomial::new(vec![1, 0, 1]); // x^2 + 1
        assert!(matches!(
            isolate_root(&p, &Interval::of(0.0, 1.0), 1e-6),
            Err(Error::NoSignChange)
        ));
    }

    #[test]
    fn width_goal_monotonicity() {
        let p = Polynomial::new(vec![-2, 0, 1]);
        let bracket = Interval::of(1.0, 2.0);
        let coarse = isolate_root(&p, &bracket, 1e-3).unwrap();
        let fine = isolate_root(&p, &bracket, 1e-9).unwrap();
        assert!(fine.width() <= coarse.width());
        assert!(fine.is_subset_of(&bracket));
        assert!(coarse.is_subset_of(&bracket));
        assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn density_enclosure() {
        let c = Constants::compute(P192, 1e-30).unwrap();
        assert!(c.delta.lo_f64() > 0.9092 && c.delta.hi_f64() < 0.9094);
        assert!(c.delta.contains(0.9093065016241750));
        assert!(c.delta.width() <= 1e-10);
        // delta > pi/sqrt(12)
        let hex = pi(P192)
            .checked_div(&Interval::point(12.0).to_precision(P192).sqrt().unwrap())
            .unwrap();
        assert_eq!(c.delta.compare(&hex), crate::Cmp::CertainlyGE);
        assert!(c.delta_over_pi.lo_f64() > 0.2893 && c.delta_over_pi.hi_f64() < 0.2895);
        assert!(c.delta_over_pi.contains(0.2894412490381720));
    }

    #[test]
    fn density_polynomial_certificate() {
        let c = Constants::compute(P192, 1e-30).unwrap();
        assert_eq!(verify_density_polynomial(&c.delta_over_pi), Verdict::Pass);
        // 0.5/pi is not a root
        let half = Interval::point(0.5).to_precision(P192);
        let bad = half.checked_div(&pi(P192)).unwrap();
        assert_eq!(verify_density_polynomial(&bad), Verdict::Fail);
    }

    #[test]
    fn density_polynomial_wide_enclosure() {
        // The polynomial has a single simple root near 0.2894 (next real root
        // at -1.19), so a width-0.01 enclosure of delta still earns the
        // sign-change certificate. The exact-rational oracle in the
        // integration suite pins the endpoint signs.
        let c = Constants::compute(P192, 1e-30).unwrap();
        let mid = c.delta.mid_f64();
        let wide = Interval::of(mid - 0.005, mid + 0.005).to_precision(P192);
        let wide_dpi = wide.checked_div(&pi(P192)).unwrap();
        assert_eq!(verify_density_polynomial(&wide_dpi), Verdict::Pass);
    }

    #[test]
    fn roots_satisfy_their_polynomials() {
        let c = Constants::compute(P192, 1e-30).unwrap();
        assert!(Polynomial::r_defining().eval(&c.r).contains_zero());
        assert!(Polynomial::s_defining().eval(&c.s).contains_zero());
        assert!(Polynomial::density_defining().eval(&c.delta_over_pi).contains_zero());
    }
}
