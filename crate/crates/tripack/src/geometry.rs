//! Interval-certified triangle and circle geometry: angles, areas, coverage,
//! excess, support circles and signed edge distances.
//!
//! A triangle is described by the three circle radii at its vertices and the
//! three edge lengths, `lengths[i]` being the edge opposite vertex `i`. For
//! the support circle the triangle is placed canonically: vertex 1 at the
//! origin, vertex 2 on the positive horizontal axis, vertex 3 above it.

use crate::interval::{Cmp, Interval, Precision};
use crate::roots::Verdict;
use crate::{Error, Result};

/// One of the three circle sizes of the target packing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum CircleSize {
    /// size s (smallest)
    S,
    /// size r
    R,
    /// size 1 (largest)
    One,
}

impl CircleSize {
    pub const ALL: [CircleSize; 3] = [CircleSize::S, CircleSize::R, CircleSize::One];

    pub fn label(self) -> &'static str {
        match self {
            CircleSize::S => "s",
            CircleSize::R => "r",
            CircleSize::One => "1",
        }
    }
}

/// A multiset of three circle sizes, kept sorted ascending; identifies one of
/// the ten tight-triangle types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleClass(pub [CircleSize; 3]);

impl TriangleClass {
    pub fn new(mut sizes: [CircleSize; 3]) -> Self {
        sizes.sort();
        TriangleClass(sizes)
    }

    /// The ten classes in lexicographic order of (x, y, z) with s < r < 1.
    pub fn all() -> Vec<TriangleClass> {
        use CircleSize::*;
        let mut out = Vec::new();
        for x in [S, R, One] {
            for y in [S, R, One] {
                for z in [S, R, One] {
                    if x <= y && y <= z {
                        out.push(TriangleClass([x, y, z]));
                    }
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        self.0.iter().map(|c| c.label()).collect()
    }
}

/// A triangle given by its three vertex circle radii and three edge-length
/// intervals; `lengths[i]` is opposite vertex `i`.
#[derive(Clone, Debug)]
pub struct TriangleShape {
    pub sizes: [Interval; 3],
    pub lengths: [Interval; 3],
}

impl TriangleShape {
    pub fn new(sizes: [Interval; 3], lengths: [Interval; 3]) -> Self {
        TriangleShape { sizes, lengths }
    }

    /// The tight (mutually tangent) triangle with the given radii.
    pub fn tight_from_values(sizes: [Interval; 3]) -> Result<Self> {
        let lengths = [
            &sizes[1] + &sizes[2],
            &sizes[0] + &sizes[2],
            &sizes[0] + &sizes[1],
        ];
        Ok(TriangleShape { sizes, lengths })
    }

    pub fn precision(&self) -> Precision {
        self.sizes[0].precision()
    }
}

/// Cosine of the angle at vertex `i` by the law of cosines.
fn cos_at(t: &TriangleShape, i: usize) -> Interval {
    let j = (i + 1) % 3;
    let k = (i + 2) % 3;
    let num = &(&t.lengths[j].square() + &t.lengths[k].square()) - &t.lengths[i].square();
    let den = &(&Interval::from_int(2) * &t.lengths[j]) * &t.lengths[k];
    debug_assert!(den.certainly_positive());
    &num / &den
}

/// Enclosures of the three vertex angles.
///
/// Fails with `InfeasibleBox` when some cosine enclosure misses `[-1, 1]`
/// entirely (the triangle inequality is certainly violated on the whole box).
pub fn angles(t: &TriangleShape) -> Result<[Interval; 3]> {
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let c = cos_at(t, i);
        match c.acos() {
            Ok(a) => out.push(a),
            Err(Error::EmptyDomainIntersection) => return Err(Error::InfeasibleBox),
            Err(e) => return Err(e),
        }
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Heron's formula; the radicand is clamped at zero on boxes that straddle
/// degeneracy.
pub fn area(t: &TriangleShape) -> Result<Interval> {
    let prec = t.precision();
    let half = Interval::point(0.5).to_precision(prec);
    let p = &(&(&t.lengths[0] + &t.lengths[1]) + &t.lengths[2]) * &half;
    let radicand = &(&(&p * &(&p - &t.lengths[0])) * &(&p - &t.lengths[1])) * &(&p - &t.lengths[2]);
    let clamped = radicand
        .intersect(&Interval::of(0.0, f64::INFINITY).to_precision(prec))
        .unwrap_or_else(|| Interval::zero().to_precision(prec));
    clamped.sqrt()
}

/// Area of the triangle inside the three circles: the sector formula
/// sum of size(v)^2 * angle(v) / 2.
pub fn coverage(t: &TriangleShape) -> Result<Interval> {
    let th = angles(t)?;
    coverage_from_angles(t, &th)
}

pub fn coverage_from_angles(t: &TriangleShape, th: &[Interval; 3]) -> Result<Interval> {
    let half = Interval::point(0.5).to_precision(t.precision());
    let mut acc = Interval::zero().to_precision(t.precision());
    for i in 0..3 {
        acc = &acc + &(&(&t.sizes[i].square() * &th[i]) * &half);
    }
    Ok(acc)
}

/// Excess E(T) = delta * area(T) - cov(T).
pub fn excess(t: &TriangleShape, delta: &Interval) -> Result<Interval> {
    Ok(&(delta * &area(t)?) - &coverage(t)?)
}

/// A support circle: the circle tangent to the three circles of a triangle,
/// with the signed distance of its center to each edge (`d[i]` for the edge
/// opposite vertex `i`, positive when the center lies on the same side as
/// that vertex).
#[derive(Clone, Debug)]
pub struct SupportCircle {
    pub radius: Interval,
    pub d: [Interval; 3],
}

/// Canonical placement of the triangle: vertex 1 at the origin, vertex 2 at
/// `(c, 0)` with `c = lengths[2]`, vertex 3 at `(px, py)` with `py >= 0`.
struct Placement {
    c: Interval,
    px: Interval,
    py2: Interval,
}

fn placement(t: &TriangleShape) -> Placement {
    let prec = t.precision();
    let c = t.lengths[2].clone();
    let two = Interval::from_int(2);
    debug_assert!(c.certainly_positive());
    let px = &(&(&c.square() + &t.lengths[1].square()) - &t.lengths[0].square()) / &(&two * &c);
    let py2_raw = &t.lengths[1].square() - &px.square();
    let py2 = py2_raw
        .intersect(&Interval::of(0.0, f64::INFINITY).to_precision(prec))
        .unwrap_or_else(|| Interval::zero().to_precision(prec));
    Placement { c, px, py2 }
}

/// Coefficients of the radius quadratic `A rho^2 + B rho + C = 0` whose real
/// roots are the radii of circles tangent to all three circles of the
/// triangle. Derived from `|X - v_i| = rho + size_i` by eliminating the
/// center coordinates; the parametrization is division-free except for the
/// division by `lengths[2]`.
fn radius_quadratic(t: &TriangleShape, pl: &Placement) -> (Interval, Interval, Interval) {
    let two = Interval::from_int(2);
    let four = Interval::from_int(4);
    let eight = Interval::from_int(8);
    let (a, b, g) = (&t.sizes[0], &t.sizes[1], &t.sizes[2]);
    let beta1 = &(a - b) / &pl.c;
    let alpha1 = &(&pl.c.square() + &(&(a - b) * &(a + b))) / &(&two * &pl.c);
    let n1 = &(&two * &(a - g)) - &(&(&two * &pl.px) * &beta1);
    let n0 = &(&(&a.square() - &g.square()) + &t.lengths[1].square()) - &(&(&two * &pl.px) * &alpha1);
    let qa = &(&(&four * &pl.py2) * &(&beta1.square() - &Interval::from_int(1))) + &n1.square();
    let qb = &(&(&eight * &pl.py2) * &(&(&alpha1 * &beta1) - a)) + &(&(&two * &n1) * &n0);
    let qc = &(&(&four * &pl.py2) * &(&alpha1.square() - &a.square())) + &n0.square();
    (qa, qb, qc)
}

/// Certifies that no circle tangent to all three triangle circles has a
/// radius in `[0, cap]`, by interval evaluation of the radius quadratic on
/// subdivisions of that range. A triangle of an FM-triangulation of a
/// saturated packing has a support circle of size below s, so a certified
/// `true` proves the box contains no such triangle.
pub fn no_tangent_radius_within(t: &TriangleShape, cap: &Interval) -> bool {
    let pl = placement(t);
    let (qa, qb, qc) = radius_quadratic(t, &pl);
    let cap_hi = cap.hi_f64();
    if cap_hi <= 0.0 {
        return false;
    }
    const PIECES: usize = 8;
    for k in 0..PIECES {
        let lo = cap_hi * k as f64 / PIECES as f64;
        let hi = cap_hi * (k + 1) as f64 / PIECES as f64;
        let rho = Interval::of(lo, hi).to_precision(t.precision());
        let q = &(&(&qa * &rho.square()) + &(&qb * &rho)) + &qc;
        if q.contains_zero() {
            return false;
        }
    }
    true
}

/// Solves for the support circle: radius and the three signed edge
/// distances. The root with certified sign conditions is selected; if both
/// quadratic roots could be nonnegative the selection is indeterminate and
/// the caller should split its box.
pub fn support_circle(t: &TriangleShape) -> Result<SupportCircle> {
    let prec = t.precision();
    let pl = placement(t);
    let (qa, qb, qc) = radius_quadratic(t, &pl);
    let disc = &qb.square() - &(&(&Interval::from_int(4) * &qa) * &qc);
    if disc.certainly_negative() {
        return Err(Error::NoRealSolution);
    }
    if disc.contains_zero() || qa.contains_zero() {
        return Err(Error::IndeterminateRoot);
    }
    let sq = disc.sqrt()?;
    let two_a = &Interval::from_int(2) * &qa;
    let r1 = &(&qb.neg_iv() - &sq) / &two_a;
    let r2 = &(&qb.neg_iv() + &sq) / &two_a;
    let c1 = !r1.certainly_negative();
    let c2 = !r2.certainly_negative();
    let rho = match (c1, c2) {
        (false, false) => return Err(Error::NoRealSolution),
        (true, false) => r1,
        (false, true) => r2,
        (true, true) => return Err(Error::IndeterminateRoot),
    };
    let rho = rho
        .intersect(&Interval::of(0.0, f64::INFINITY).to_precision(prec))
        .expect("nonnegative root candidate");

    if !pl.py2.certainly_positive() {
        return Err(Error::IndeterminateRoot);
    }
    let py = pl.py2.sqrt()?;
    let two = Interval::from_int(2);
    let (a, b, g) = (&t.sizes[0], &t.sizes[1], &t.sizes[2]);
    let beta1 = &(a - b) / &pl.c;
    let alpha1 = &(&pl.c.square() + &(&(a - b) * &(a + b))) / &(&two * &pl.c);
    let n1 = &(&two * &(a - g)) - &(&(&two * &pl.px) * &beta1);
    let n0 = &(&(&a.square() - &g.square()) + &t.lengths[1].square()) - &(&(&two * &pl.px) * &alpha1);
    let x1 = &alpha1 + &(&beta1 * &rho);
    let x2 = &(&(&n1 * &rho) + &n0) / &(&two * &py);

    // d[2]: edge v1-v2 (the horizontal axis); positive side is v3's side.
    let d3 = x2.clone();
    // d[1]: edge v1-v3; positive side is v2's side.
    let d2 = &(&(&py * &x1) - &(&pl.px * &x2)) / &t.lengths[1];
    // d[0]: edge v2-v3; positive side is v1's side.
    let d1 = &(&(&py * &(&pl.c - &x1)) + &(&(&pl.px - &pl.c) * &x2)) / &t.lengths[0];
    Ok(SupportCircle { radius: rho, d: [d1, d2, d3] })
}

/// Edge lengths of the stretched triangle in which the circle at vertex
/// `lifted` is tangent to the two other circles and to the line through
/// their centers.
pub fn stretched_lengths(sizes: &[Interval; 3], lifted: usize) -> Result<[Interval; 3]> {
    let i = (lifted + 1) % 3;
    let j = (lifted + 2) % 3;
    let z = &sizes[lifted];
    let leg = |q: &Interval| -> Result<Interval> {
        (&(q + z).square() - &z.square()).sqrt()
    };
    let long = &leg(&sizes[i])? + &leg(&sizes[j])?;
    let mut lengths = [Interval::zero(), Interval::zero(), Interval::zero()];
    lengths[lifted] = long;
    lengths[i] = &sizes[j] + z;
    lengths[j] = &sizes[i] + z;
    Ok(lengths)
}

/// Checks the edge-flip identity: two adjacent stretched triangles with
/// sizes (x, y, z) (z-circle tangent to the other two and their center
/// line, mirrored across it) have the same total excess as the two tight
/// triangles (x,z,z) and (y,z,z) obtained by flipping the shared edge.
pub fn flip_preserves_excess_check(
    sizes: &[Interval; 3],
    delta: &Interval,
    tol: f64,
) -> Result<(Verdict, Interval)> {
    let lengths = stretched_lengths(sizes, 2)?;
    let stretched = TriangleShape::new(sizes.clone(), lengths);
    let e_stretched = excess(&stretched, delta)?;
    let tight_a = TriangleShape::tight_from_values([
        sizes[0].clone(),
        sizes[2].clone(),
        sizes[2].clone(),
    ])?;
    let tight_b = TriangleShape::tight_from_values([
        sizes[1].clone(),
        sizes[2].clone(),
        sizes[2].clone(),
    ])?;
    let flipped = &excess(&tight_a, delta)? + &excess(&tight_b, delta)?;
    let diff = &(&Interval::from_int(2) * &e_stretched) - &flipped;
    let verdict = if diff.contains_zero() && diff.width() <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok((verdict, diff))
}

/// Angle at the center of the size-q circle in the tight triangle with
/// neighbor sizes a and b: law of cosines with sides (q+a, q+b, a+b).
pub fn tight_center_angle_values(q: &Interval, a: &Interval, b: &Interval) -> Result<Interval> {
    let qa = q + a;
    let qb = q + b;
    let ab = a + b;
    let num = &(&qa.square() + &qb.square()) - &ab.square();
    let den = &(&Interval::from_int(2) * &qa) * &qb;
    (&num / &den).acos()
}

/// Compares two intervals, certifying `a >= b`.
pub fn certainly_ge(a: &Interval, b: &Interval) -> bool {
    a.compare(b) == Cmp::CertainlyGE
}

/// Writes a point triangle and its support circle as a standalone SVG file.
/// Debug aid only; no stability guarantee on the output.
pub fn svg_dump(t: &TriangleShape, path: &std::path::Path) -> Result<()> {
    let pl = placement(t);
    let c = pl.c.mid_f64();
    let px = pl.px.mid_f64();
    let py = pl.py2.mid_f64().max(0.0).sqrt();
    let sizes: Vec<f64> = t.sizes.iter().map(|s| s.mid_f64()).collect();
    let mut circles = vec![
        (0.0, 0.0, sizes[0], "#4477aa"),
        (c, 0.0, sizes[1], "#4477aa"),
        (px, py, sizes[2], "#4477aa"),
    ];
    if let Ok(sc) = support_circle(t) {
        let rho = sc.radius.mid_f64();
        let x2 = sc.d[2].mid_f64();
        // reconstruct the center x-coordinate from the placement
        let beta1 = (sizes[0] - sizes[1]) / c;
        let alpha1 = (c * c + (sizes[0] - sizes[1]) * (sizes[0] + sizes[1])) / (2.0 * c);
        circles.push((alpha1 + beta1 * rho, x2, rho, "#cc3311"));
    }
    let pad = 1.0 + sizes.iter().cloned().fold(0.0, f64::max);
    let min_x = -pad;
    let min_y = -pad - py.max(0.0);
    let w = c + 2.0 * pad;
    let h = py + 2.0 * pad;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{min_x} {min_y} {w} {h}\">\n"
    );
    svg.push_str(&format!(
        "  <polygon points=\"0,0 {c},0 {px},{mpy}\" fill=\"none\" stroke=\"#222\" stroke-width=\"0.02\"/>\n",
        mpy = -py
    ));
    for (x, y, rr, color) in circles {
        svg.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{my}\" r=\"{rr}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.02\"/>\n",
            my = -y
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}
