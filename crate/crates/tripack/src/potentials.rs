//! The vertex-potential table and the evaluation of vertex, edge and total
//! potentials.
//!
//! The 18 values V_aqb (potential at the center of the size-q circle of the
//! tight triangle with neighbor sizes a and b, V_aqb = V_bqa) are determined
//! by a 19-equation linear system: U = E for the ten tight classes, six apex
//! zeros V_aba = 0, and the three corona equations of the target packing.
//! Exactly one linear dependency ties the system together (the zero excess
//! sum over the primitive cell), so the table is solved by substitution and
//! the dependent tight equation is verified as a residual.

use std::collections::BTreeMap;

use crate::geometry::{self, CircleSize, SupportCircle, TriangleClass, TriangleShape};
use crate::interval::{self, Interval, Precision};
use crate::roots::Constants;
use crate::{Error, Result};

use CircleSize::{One, R, S};

/// Canonical key for V_aqb: the neighbor pair is stored sorted.
pub type VKey = (CircleSize, CircleSize, CircleSize);

/// Canonical key for an unordered size pair.
pub type PairKey = (CircleSize, CircleSize);

pub fn vkey(a: CircleSize, q: CircleSize, b: CircleSize) -> VKey {
    (a.min(b), q, a.max(b))
}

pub fn pair_key(x: CircleSize, y: CircleSize) -> PairKey {
    (x.min(y), x.max(y))
}

/// The deviation and edge-potential coefficients of the local inequality;
/// defaults are the values fixed in the paper's final proposition.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub m: BTreeMap<CircleSize, f64>,
    pub l: BTreeMap<PairKey, f64>,
    pub q: BTreeMap<PairKey, f64>,
}

impl Default for Coefficients {
    fn default() -> Self {
        let m = [(One, 0.12), (R, 0.03), (S, 0.03)].into_iter().collect();
        let l = [
            (pair_key(One, One), 2.78),
            (pair_key(One, R), 2.60),
            (pair_key(One, S), 2.32),
            (pair_key(R, R), 2.42),
            (pair_key(R, S), 2.14),
            (pair_key(S, S), 1.94),
        ]
        .into_iter()
        .collect();
        let q = [
            (pair_key(One, One), 0.39),
            (pair_key(One, R), 0.31),
            (pair_key(One, S), 0.30),
            (pair_key(R, R), 0.26),
            (pair_key(R, S), 0.26),
            (pair_key(S, S), 0.25),
        ]
        .into_iter()
        .collect();
        Coefficients { m, l, q }
    }
}

/// The potential table: V entries, deviation coefficients m, edge-length
/// thresholds l, edge-potential slopes q, optional caps Z, plus the certified
/// tight angles used when evaluating vertex potentials.
#[derive(Clone, Debug)]
pub struct PotentialTable {
    pub v: BTreeMap<VKey, Interval>,
    pub m: BTreeMap<CircleSize, Interval>,
    pub l: BTreeMap<PairKey, Interval>,
    pub q_coef: BTreeMap<PairKey, Interval>,
    pub caps: Option<BTreeMap<CircleSize, Interval>>,
    pub tight_angles: BTreeMap<VKey, Interval>,
    pub excesses: BTreeMap<TriangleClass, Interval>,
    pub precision: Precision,
}

fn tight_excess(constants: &Constants, class: &TriangleClass) -> Result<Interval> {
    let t = TriangleShape::tight_from_values([
        constants.size_value(class.0[0]),
        constants.size_value(class.0[1]),
        constants.size_value(class.0[2]),
    ])?;
    geometry::excess(&t, &constants.delta)
}

/// Solves the 19-equation system for the 18 V values.
///
/// Order: the six apex zeros are assigned; the nine single/double-size tight
/// equations each determine one V directly; the small- and medium-circle
/// corona equations give V_1sr and V_1rs; the large-circle corona equation
/// gives V_r1s; the remaining tight equation for {1,r,s} is the dependent one
/// and is verified as a residual together with the rest of the system.
pub fn solve_v_table(constants: &Constants) -> Result<BTreeMap<VKey, Interval>> {
    let prec = constants.precision;
    let zero = Interval::zero().to_precision(prec);
    let half = Interval::point(0.5).to_precision(prec);
    let third = Interval::from_int(1)
        .to_precision(prec)
        .checked_div(&Interval::from_int(3).to_precision(prec))?;
    let quarter = Interval::point(0.25).to_precision(prec);

    let e = |x: CircleSize, y: CircleSize, z: CircleSize| -> Result<Interval> {
        tight_excess(constants, &TriangleClass::new([x, y, z]))
    };

    let mut v: BTreeMap<VKey, Interval> = BTreeMap::new();
    // apex zeros V_aba = 0 for a != b
    for a in CircleSize::ALL {
        for q in CircleSize::ALL {
            if a != q {
                v.insert(vkey(a, q, a), zero.clone());
            }
        }
    }
    // equilateral classes: 3 V_qqq = E_qqq
    for q in CircleSize::ALL {
        v.insert(vkey(q, q, q), &e(q, q, q)? * &third);
    }
    // isoceles classes: the apex is zero, the two base vertices carry E/2
    v.insert(vkey(One, One, R), &e(One, One, R)? * &half);
    v.insert(vkey(One, One, S), &e(One, One, S)? * &half);
    v.insert(vkey(One, R, R), &e(One, R, R)? * &half);
    v.insert(vkey(One, S, S), &e(One, S, S)? * &half);
    v.insert(vkey(R, R, S), &e(R, R, S)? * &half);
    v.insert(vkey(R, S, S), &e(R, S, S)? * &half);
    // corona equations of the target packing:
    //   small circle:  V_1s1 + 4 V_1sr = 0
    //   medium circle: 2 V_1rr + 4 V_1rs = 0
    //   large circle:  V_r1r + 2 V_11s + 4 V_r1s = 0
    let v_1s1 = v[&vkey(One, S, One)].clone();
    v.insert(vkey(One, S, R), (&v_1s1 * &quarter).neg_iv());
    let v_1rr = v[&vkey(One, R, R)].clone();
    v.insert(vkey(One, R, S), (&v_1rr * &half).neg_iv());
    let v_r1r = v[&vkey(R, One, R)].clone();
    let v_11s = v[&vkey(One, One, S)].clone();
    let two = Interval::from_int(2);
    v.insert(
        vkey(R, One, S),
        (&(&v_r1r + &(&two * &v_11s)) * &quarter).neg_iv(),
    );
    debug_assert_eq!(v.len(), 18);
    Ok(v)
}

/// One defining equation of the table, as a labelled residual.
pub struct Residual {
    pub label: String,
    pub value: Interval,
}

impl PotentialTable {
    /// Builds the full table from certified constants and the configured
    /// coefficients; every defining equation's residual must contain zero.
    pub fn build(constants: &Constants, coefs: &Coefficients, caps_enabled: bool) -> Result<PotentialTable> {
        let prec = constants.precision;
        let v = solve_v_table(constants)?;
        let mut tight_angles = BTreeMap::new();
        for q in CircleSize::ALL {
            for a in CircleSize::ALL {
                for b in CircleSize::ALL {
                    let key = vkey(a, q, b);
                    if !tight_angles.contains_key(&key) {
                        let th = geometry::tight_center_angle_values(
                            &constants.size_value(q),
                            &constants.size_value(a),
                            &constants.size_value(b),
                        )?;
                        tight_angles.insert(key, th);
                    }
                }
            }
        }
        let mut excesses = BTreeMap::new();
        for class in TriangleClass::all() {
            excesses.insert(class, tight_excess(constants, &class)?);
        }
        let m = coefs
            .m
            .iter()
            .map(|(k, x)| (*k, Interval::point(*x).to_precision(prec)))
            .collect();
        let l = coefs
            .l
            .iter()
            .map(|(k, x)| (*k, Interval::point(*x).to_precision(prec)))
            .collect();
        let q_coef = coefs
            .q
            .iter()
            .map(|(k, x)| (*k, Interval::point(*x).to_precision(prec)))
            .collect();
        let mut table = PotentialTable {
            v,
            m,
            l,
            q_coef,
            caps: None,
            tight_angles,
            excesses,
            precision: prec,
        };
        for res in table.residuals() {
            if !res.value.contains_zero() {
                return Err(Error::InconsistentSystem(format!(
                    "residual {} = {} excludes zero",
                    res.label, res.value
                )));
            }
        }
        if caps_enabled {
            table.caps = Some(compute_caps(&table)?);
        }
        Ok(table)
    }

    pub fn v_of(&self, a: CircleSize, q: CircleSize, b: CircleSize) -> &Interval {
        &self.v[&vkey(a, q, b)]
    }

    pub fn tight_angle(&self, a: CircleSize, q: CircleSize, b: CircleSize) -> &Interval {
        &self.tight_angles[&vkey(a, q, b)]
    }

    pub fn m_of(&self, q: CircleSize) -> &Interval {
        &self.m[&q]
    }

    pub fn l_of(&self, x: CircleSize, y: CircleSize) -> &Interval {
        &self.l[&pair_key(x, y)]
    }

    pub fn q_of(&self, x: CircleSize, y: CircleSize) -> &Interval {
        &self.q_coef[&pair_key(x, y)]
    }

    /// All 19 defining-equation residuals.
    pub fn residuals(&self) -> Vec<Residual> {
        let mut out = Vec::with_capacity(19);
        // ten tight equations: sum of the three vertex V's equals the excess
        for class in TriangleClass::all() {
            let [x, y, z] = class.0;
            let u = &(self.v_of(y, x, z) + self.v_of(x, y, z)) + self.v_of(x, z, y);
            out.push(Residual {
                label: format!("tight {}", class.label()),
                value: &u - &self.excesses[&class],
            });
        }
        // six apex zeros
        for a in CircleSize::ALL {
            for q in CircleSize::ALL {
                if a != q {
                    out.push(Residual {
                        label: format!("apex V_{}{}{}", a.label(), q.label(), a.label()),
                        value: self.v_of(a, q, a).clone(),
                    });
                }
            }
        }
        // three corona equations
        let four = Interval::from_int(4);
        let two = Interval::from_int(2);
        out.push(Residual {
            label: "corona small".into(),
            value: self.v_of(One, S, One) + &(&four * self.v_of(One, S, R)),
        });
        out.push(Residual {
            label: "corona medium".into(),
            value: &(&two * self.v_of(One, R, R)) + &(&four * self.v_of(One, R, S)),
        });
        out.push(Residual {
            label: "corona large".into(),
            value: &(self.v_of(R, One, R) + &(&two * self.v_of(One, One, S)))
                + &(&four * self.v_of(R, One, S)),
        });
        out
    }

    /// Residual of the zero-sum identity over the primitive cell:
    /// 4(V_1sr + V_r1s + V_1rs) + (2 V_11s + V_1s1) + (2 V_1rr + V_r1r).
    pub fn zero_sum_residual(&self) -> Interval {
        let four = Interval::from_int(4);
        let two = Interval::from_int(2);
        let t1 = &four
            * &(&(self.v_of(One, S, R) + self.v_of(R, One, S)) + self.v_of(One, R, S));
        let t2 = &(&two * self.v_of(One, One, S)) + self.v_of(One, S, One);
        let t3 = &(&two * self.v_of(One, R, R)) + self.v_of(R, One, R);
        &(&t1 + &t2) + &t3
    }

    /// Outward conversion of every entry to another precision.
    pub fn to_precision(&self, p: Precision) -> PotentialTable {
        let conv = |m: &BTreeMap<VKey, Interval>| {
            m.iter().map(|(k, v)| (*k, v.to_precision(p))).collect()
        };
        PotentialTable {
            v: conv(&self.v),
            m: self.m.iter().map(|(k, v)| (*k, v.to_precision(p))).collect(),
            l: self.l.iter().map(|(k, v)| (*k, v.to_precision(p))).collect(),
            q_coef: self.q_coef.iter().map(|(k, v)| (*k, v.to_precision(p))).collect(),
            caps: self
                .caps
                .as_ref()
                .map(|c| c.iter().map(|(k, v)| (*k, v.to_precision(p))).collect()),
            tight_angles: conv(&self.tight_angles),
            excesses: self
                .excesses
                .iter()
                .map(|(k, v)| (*k, v.to_precision(p)))
                .collect(),
            precision: p,
        }
    }
}

/// Vertex potential U_v = V_xqy + m_q |angle(T, v) - tight angle|, capped at
/// Z_q when caps are enabled.
pub fn vertex_potential(
    table: &PotentialTable,
    tags: [CircleSize; 3],
    v: usize,
    angle_v: &Interval,
) -> Interval {
    let q = tags[v];
    let a = tags[(v + 1) % 3];
    let b = tags[(v + 2) % 3];
    let key = vkey(a, q, b);
    let deviation = (angle_v - &table.tight_angles[&key]).abs_iv();
    let raw = &table.v[&key] + &(&table.m[&q] * &deviation);
    match &table.caps {
        Some(caps) => raw.min_iv(&caps[&q]),
        None => raw,
    }
}

/// Edge potential: zero when the edge is certainly shorter than the
/// threshold, `q_xy * d_e` when certainly at least it, and the convex hull of
/// both cases when the length interval straddles the threshold.
pub fn edge_potential(
    table: &PotentialTable,
    tags: [CircleSize; 3],
    t: &TriangleShape,
    e: usize,
    support: &SupportCircle,
) -> Interval {
    let x = tags[(e + 1) % 3];
    let y = tags[(e + 2) % 3];
    let key = pair_key(x, y);
    let len = &t.lengths[e];
    let threshold = &table.l[&key];
    let zero = Interval::zero().to_precision(t.precision());
    if len.hi_f64() < threshold.lo_f64() {
        return zero;
    }
    let active = &table.q_coef[&key] * &support.d[e];
    if len.lo_f64() >= threshold.hi_f64() {
        active
    } else {
        active.hull(&zero)
    }
}

/// Whether any edge of the triangle could reach its threshold (if not, all
/// edge potentials are certainly zero and no support circle is needed).
pub fn any_edge_active(table: &PotentialTable, tags: [CircleSize; 3], t: &TriangleShape) -> bool {
    (0..3).any(|e| {
        let key = pair_key(tags[(e + 1) % 3], tags[(e + 2) % 3]);
        t.lengths[e].hi_f64() >= table.l[&key].lo_f64()
    })
}

/// Total potential: three vertex potentials plus three edge potentials.
pub fn total_potential(
    table: &PotentialTable,
    tags: [CircleSize; 3],
    t: &TriangleShape,
) -> Result<Interval> {
    let th = geometry::angles(t)?;
    let mut u = Interval::zero().to_precision(t.precision());
    for v in 0..3 {
        u = &u + &vertex_potential(table, tags, v, &th[v]);
    }
    if any_edge_active(table, tags, t) {
        let support = geometry::support_circle(t)?;
        for e in 0..3 {
            u = &u + &edge_potential(table, tags, t, e, &support);
        }
    }
    Ok(u)
}

/// Caps Z_q = 2 pi |min over tight classes with a size-q vertex of V / angle|.
pub fn compute_caps(table: &PotentialTable) -> Result<BTreeMap<CircleSize, Interval>> {
    let prec = table.precision;
    let two_pi = interval::two_pi(prec);
    let mut out = BTreeMap::new();
    for q in CircleSize::ALL {
        let mut min_ratio: Option<Interval> = None;
        for a in CircleSize::ALL {
            for b in CircleSize::ALL {
                let key = vkey(a, q, b);
                let ratio = table.v[&key].checked_div(&table.tight_angles[&key])?;
                min_ratio = Some(match min_ratio {
                    None => ratio,
                    Some(m) => m.min_iv(&ratio),
                });
            }
        }
        let z = &two_pi * &min_ratio.expect("nonempty").abs_iv();
        out.insert(q, z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::Constants;

    const P192: Precision = Precision::Bits(192);

    fn setup() -> (Constants, PotentialTable) {
        let c = Constants::compute(P192, 1e-30).unwrap();
        let t = PotentialTable::build(&c, &Coefficients::default(), false).unwrap();
        (c, t)
    }

    #[test]
    fn v_table_solves_and_residuals_vanish() {
        let (_, table) = setup();
        for res in table.residuals() {
            assert!(res.value.contains_zero(), "{} = {}", res.label, res.value);
            assert!(res.value.width() <= 1e-9, "{} too wide", res.label);
        }
        assert!(table.zero_sum_residual().contains_zero());
    }

    #[test]
    fn apex_entries_exactly_zero() {
        let (_, table) = setup();
        for a in CircleSize::ALL {
            for q in CircleSize::ALL {
                if a != q {
                    let v = table.v_of(a, q, a);
                    assert_eq!(v.lo_f64(), 0.0);
                    assert_eq!(v.hi_f64(), 0.0);
                }
            }
        }
    }

    #[test]
    fn v_values_match_reference() {
        let (_, table) = setup();
        let cases = [
            (vkey(One, One, One), 0.0013895778902954215),
            (vkey(R, R, R), 0.0009672387202105192),
            (vkey(S, S, S), 0.0005889953008100406),
            (vkey(One, One, R), 0.0013673262833359746),
            (vkey(One, One, S), -0.0006723513388008552),
            (vkey(One, R, R), 0.0012067431489213362),
            (vkey(One, S, S), -0.0005525565019586038),
            (vkey(R, R, S), 0.0006335593550244198),
            (vkey(R, S, S), 0.0005288029826128142),
            (vkey(One, R, S), -0.0006033715744606681),
            (vkey(R, One, S), 0.0003361756694004276),
            (vkey(One, S, R), 0.0),
        ];
        for (key, expect) in cases {
            let v = table.v[&key].clone();
            assert!(
                (v.mid_f64() - expect).abs() < 1e-15,
                "V_{key:?} = {v} expected {expect}"
            );
        }
        // V_1sr is forced to contain zero by V_1s1 = 0 and the small corona
        assert!(table.v[&vkey(One, S, R)].contains_zero());
    }

    #[test]
    fn vertex_potential_on_tight_and_deviated() {
        let (c, table) = setup();
        let tags = [One, One, One];
        let tight_angle = table.tight_angle(One, One, One).clone();
        let u = vertex_potential(&table, tags, 0, &tight_angle);
        // on a tight triangle the deviation term contains zero
        assert!(u.contains(table.v_of(One, One, One).mid_f64()));
        // deviated by 0.01: U = V_111 + m_1 * 0.01
        let deviated = &tight_angle + &Interval::point(0.01).to_precision(P192);
        let u = vertex_potential(&table, tags, 0, &deviated);
        let expect = table.v_of(One, One, One).mid_f64() + 0.12 * 0.01;
        assert!((u.mid_f64() - expect).abs() < 1e-12);
        let _ = c;
    }

    #[test]
    fn capping_clamps_large_deviation() {
        let c = Constants::compute(P192, 1e-30).unwrap();
        let table = PotentialTable::build(&c, &Coefficients::default(), true).unwrap();
        let caps = table.caps.as_ref().unwrap();
        let tags = [One, One, One];
        let big_angle = &table.tight_angle(One, One, One).clone()
            + &Interval::point(1.0).to_precision(P192);
        let u = vertex_potential(&table, tags, 0, &big_angle);
        // raw would be V_111 + 0.12, far above Z_1
        assert!(u.intersect(&caps[&One]).is_some());
        assert!(u.hi_f64() <= caps[&One].hi_f64() + 1e-15);
    }

    #[test]
    fn caps_match_printed_values() {
        let (_, table) = setup();
        let caps = compute_caps(&table).unwrap();
        let cases = [
            (One, 0.004590946872294590),
            (R, 0.003711333429269956),
            (S, 0.002978914148088219),
        ];
        for (q, expect) in cases {
            let z = &caps[&q];
            assert!((z.mid_f64() - expect).abs() < 1e-15, "Z_{} = {}", q.label(), z);
        }
    }

    #[test]
    fn capping_never_changes_tight_total() {
        let c = Constants::compute(P192, 1e-30).unwrap();
        let table = PotentialTable::build(&c, &Coefficients::default(), true).unwrap();
        let caps = table.caps.as_ref().unwrap();
        for class in TriangleClass::all() {
            for v in 0..3 {
                let q = class.0[v];
                let a = class.0[(v + 1) % 3];
                let b = class.0[(v + 2) % 3];
                // raw vertex potential on the tight triangle is V itself,
                // certainly below the cap
                assert!(
                    geometry::certainly_ge(&caps[&q], table.v_of(a, q, b)),
                    "cap binds on tight {} vertex {}",
                    class.label(),
                    v
                );
            }
        }
    }

    #[test]
    fn edge_potential_cases() {
        let (c, table) = setup();
        // tight triangles: every edge certainly below every threshold
        for class in TriangleClass::all() {
            let t = TriangleShape::tight_from_values([
                c.size_value(class.0[0]),
                c.size_value(class.0[1]),
                c.size_value(class.0[2]),
            ])
            .unwrap();
            assert!(!any_edge_active(&table, class.0, &t));
        }
        // straddling threshold: hull rule
        let tags = [S, One, One];
        let t = TriangleShape::new(
            [
                c.size_value(S).to_precision(Precision::Double),
                Interval::point(1.0),
                Interval::point(1.0),
            ],
            [
                Interval::of(2.77, 2.79),
                Interval::of(1.7, 1.8),
                Interval::of(1.7, 1.8),
            ],
        );
        let support = SupportCircle {
            radius: Interval::of(0.1, 0.2),
            d: [
                Interval::of(0.1, 0.2),
                Interval::of(0.1, 0.2),
                Interval::of(0.1, 0.2),
            ],
        };
        let u = edge_potential(&table, tags, &t, 0, &support);
        assert!(u.lo_f64() <= 0.0 && u.lo_f64() >= -1e-12);
        assert!((u.hi_f64() - 0.078).abs() < 1e-12);
    }

    #[test]
    fn total_potential_equals_excess_on_tight_classes() {
        let (c, table) = setup();
        for class in TriangleClass::all() {
            let t = TriangleShape::tight_from_values([
                c.size_value(class.0[0]),
                c.size_value(class.0[1]),
                c.size_value(class.0[2]),
            ])
            .unwrap();
            let u = total_potential(&table, class.0, &t).unwrap();
            let e = geometry::excess(&t, &c.delta).unwrap();
            let diff = &u - &e;
            assert!(diff.contains_zero(), "class {}: {}", class.label(), diff);
            assert!(diff.width() < 1e-25);
        }
    }

    #[test]
    fn unit_equilateral_total_is_three_v111() {
        let (c, table) = setup();
        let t = TriangleShape::tight_from_values([
            c.size_value(One),
            c.size_value(One),
            c.size_value(One),
        ])
        .unwrap();
        let u = total_potential(&table, [One, One, One], &t).unwrap();
        let expect = &Interval::from_int(3) * table.v_of(One, One, One);
        assert!(u.intersect(&expect).is_some());
    }

    #[test]
    fn table_downconversion_is_outward() {
        let (_, table) = setup();
        let f = table.to_precision(Precision::Double);
        for (key, big) in &table.v {
            let small = &f.v[key];
            assert!(big.is_subset_of(small));
        }
    }
}
