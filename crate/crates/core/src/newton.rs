//! Newton diagrams of operator collections.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::operator::{DiffOperator, MultiIndex};

/// Line `x/a + y/b = 1` through at least two exponent points with none above.
///
/// Stored as the primitive integer normal `(nx, ny)` and level `h`, so that
/// the line is `nx*x + ny*y = h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleLine {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
    /// Extreme contact points, larger `x` first.
    pub nodes: (MultiIndex, MultiIndex),
    nx: i64,
    ny: i64,
    h: i64,
}

impl AdmissibleLine {
    /// The line through `p` and `q`; `None` unless the slope is negative.
    pub(crate) fn through(p: MultiIndex, q: MultiIndex) -> Option<Self> {
        let (p, q) = if p.x() > q.x() { (p, q) } else { (q, p) };
        if !(p.x() > q.x() && p.y() < q.y()) {
            return None;
        }
        let (nx, ny) = (q.y() - p.y(), p.x() - q.x());
        let g = nx.gcd(&ny);
        let (nx, ny) = (nx / g, ny / g);
        let h = nx * p.x() + ny * p.y();
        Some(AdmissibleLine {
            a: Ratio::new(h, nx),
            b: Ratio::new(h, ny),
            nodes: (p, q),
            nx,
            ny,
            h,
        })
    }

    /// Line `x/a + y/b = 1` given integer normal data; used for ad hoc lines.
    pub fn from_intercepts(a: Ratio<i64>, b: Ratio<i64>) -> Self {
        // nx = h/a, ny = h/b with h the least common multiple making both integral
        let l = a.numer().lcm(b.numer());
        let nx = l / a.numer() * a.denom();
        let ny = l / b.numer() * b.denom();
        let g = nx.gcd(&ny).gcd(&l);
        let (nx, ny, h) = (nx / g, ny / g, l / g);
        let origin = MultiIndex::new(0, 0);
        AdmissibleLine {
            a,
            b,
            nodes: (origin, origin),
            nx,
            ny,
            h,
        }
    }

    fn level(&self, m: &MultiIndex) -> i64 {
        self.nx * m.x() + self.ny * m.y()
    }

    pub fn contains(&self, m: &MultiIndex) -> bool {
        self.level(m) == self.h
    }

    pub fn strictly_below(&self, m: &MultiIndex) -> bool {
        self.level(m) < self.h
    }

    pub fn strictly_above(&self, m: &MultiIndex) -> bool {
        self.level(m) > self.h
    }

    /// True when `a == b`, i.e. the line is parallel to the antidiagonal.
    pub fn is_antidiagonal(&self) -> bool {
        self.a == self.b
    }

    fn key(&self) -> (i64, i64, i64) {
        (self.nx, self.ny, self.h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonDiagram {
    /// All exponents, sorted.
    pub points: Vec<MultiIndex>,
    /// `Z_1 .. Z_K`, `x` decreasing.
    pub core_nodes: Vec<MultiIndex>,
    /// `Z_0 = (x_1, 0)` and `Z_{K+1} = (0, y_K)`.
    pub extended_nodes: (MultiIndex, MultiIndex),
    /// `lines[j]` joins `core_nodes[j]` and `core_nodes[j + 1]`.
    pub lines: Vec<AdmissibleLine>,
    pub kappas: Vec<u32>,
}

pub fn build_diagram(ops: &[DiffOperator]) -> Result<NewtonDiagram> {
    let mut points: Vec<MultiIndex> = ops.iter().flat_map(|o| o.support()).collect();
    points.sort();
    points.dedup();
    NewtonDiagram::from_points(points)
}

impl NewtonDiagram {
    pub fn from_points(mut points: Vec<MultiIndex>) -> Result<Self> {
        points.sort();
        points.dedup();
        if points.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let mut lines: Vec<AdmissibleLine> = Vec::new();
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                let Some(line) = AdmissibleLine::through(*p, *q) else {
                    continue;
                };
                if lines.iter().any(|l| l.key() == line.key()) {
                    continue;
                }
                if points.iter().any(|m| line.strictly_above(m)) {
                    continue;
                }
                let on: Vec<&MultiIndex> = points.iter().filter(|m| line.contains(m)).collect();
                let hi = **on.iter().max_by_key(|m| m.x()).unwrap();
                let lo = **on.iter().min_by_key(|m| m.x()).unwrap();
                lines.push(AdmissibleLine { nodes: (hi, lo), ..line });
            }
        }
        lines.sort_by_key(|l| std::cmp::Reverse(l.nodes.0.x()));
        let core_nodes: Vec<MultiIndex> = if lines.is_empty() {
            let mx = points.iter().map(|m| m.alpha1).max().unwrap();
            let my = points.iter().map(|m| m.alpha2).max().unwrap();
            let top = MultiIndex::new(mx, my);
            if !points.contains(&top) {
                return Err(Error::InternalInconsistency(
                    "no admissible line but no dominating point".into(),
                ));
            }
            vec![top]
        } else {
            let mut v = vec![lines[0].nodes.0];
            for (j, l) in lines.iter().enumerate() {
                if l.nodes.0 != *v.last().unwrap() {
                    return Err(Error::InternalInconsistency(format!(
                        "admissible line {j} does not continue the broken line"
                    )));
                }
                v.push(l.nodes.1);
            }
            v
        };
        let kappas = core_nodes
            .windows(2)
            .map(|w| {
                let dx = (w[0].x() - w[1].x()).unsigned_abs();
                let dy = (w[0].y() - w[1].y()).unsigned_abs();
                dx.gcd(&dy) as u32
            })
            .collect();
        let first = core_nodes[0];
        let last = *core_nodes.last().unwrap();
        Ok(NewtonDiagram {
            points,
            extended_nodes: (MultiIndex::new(first.alpha1, 0), MultiIndex::new(0, last.alpha2)),
            core_nodes,
            lines,
            kappas,
        })
    }

    /// Closed region bounded by the broken line and the coordinate axes.
    pub fn in_region(&self, m: &MultiIndex) -> bool {
        let first = self.core_nodes[0];
        let last = *self.core_nodes.last().unwrap();
        m.alpha1 <= first.alpha1
            && m.alpha2 <= last.alpha2
            && self.lines.iter().all(|l| !l.strictly_above(m))
    }

    /// Node or lattice point of a core segment.
    pub fn on_core(&self, m: &MultiIndex) -> bool {
        if self.lines.is_empty() {
            return *m == self.core_nodes[0];
        }
        self.in_region(m) && self.lines.iter().any(|l| l.contains(m))
    }

    pub fn is_subordinate(&self, m: &MultiIndex) -> bool {
        self.in_region(m) && !self.on_core(m)
    }

    /// Exact concavity: consecutive edge vectors turn clockwise.
    pub fn is_concave(&self) -> bool {
        self.core_nodes.windows(3).all(|w| {
            let (ax, ay) = (w[1].x() - w[0].x(), w[1].y() - w[0].y());
            let (bx, by) = (w[2].x() - w[1].x(), w[2].y() - w[1].y());
            ax * by - ay * bx > 0
        })
    }
}

pub fn senior_part(op: &DiffOperator, line: &AdmissibleLine) -> Result<DiffOperator> {
    if let Some(m) = op.support().into_iter().find(|m| line.strictly_above(m)) {
        return Err(Error::AboveLine(m));
    }
    Ok(op.restrict(|m| line.contains(m)))
}

pub fn principal_part(op: &DiffOperator, d: &NewtonDiagram) -> Result<DiffOperator> {
    if let Some(m) = op.support().into_iter().find(|m| !d.in_region(m)) {
        return Err(Error::AboveDiagram(m));
    }
    Ok(op.restrict(|m| d.on_core(m)))
}

pub fn is_subordinate(m: &MultiIndex, d: &NewtonDiagram) -> bool {
    d.is_subordinate(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactComplex;

    fn mi(a: u32, b: u32) -> MultiIndex {
        MultiIndex::new(a, b)
    }

    fn ops_of(points: &[(u32, u32)]) -> Vec<DiffOperator> {
        points.iter().map(|&(a, b)| DiffOperator::dmono(a, b)).collect()
    }

    #[test]
    fn first_order_pair() {
        let d = build_diagram(&ops_of(&[(1, 0), (0, 1)])).unwrap();
        assert_eq!(d.lines.len(), 1);
        assert_eq!(d.lines[0].a, Ratio::from_integer(1));
        assert_eq!(d.lines[0].b, Ratio::from_integer(1));
        assert_eq!(d.core_nodes, vec![mi(1, 0), mi(0, 1)]);
        assert_eq!(d.kappas, vec![1]);
        assert!(d.is_subordinate(&mi(0, 0)));
        assert!(!d.is_subordinate(&mi(3, 0)));
    }

    #[test]
    fn interior_point_is_below_the_hull() {
        // (1,1) is strictly under the segment (2,0)-(0,3)
        let d = build_diagram(&ops_of(&[(2, 0), (0, 3), (1, 1)])).unwrap();
        assert_eq!(d.core_nodes, vec![mi(2, 0), mi(0, 3)]);
        assert_eq!(d.lines[0].a, Ratio::from_integer(2));
        assert_eq!(d.lines[0].b, Ratio::from_integer(3));
        assert!(d.is_subordinate(&mi(1, 1)));
    }

    #[test]
    fn three_node_core() {
        let d = build_diagram(&ops_of(&[(3, 0), (2, 2), (0, 3), (1, 1)])).unwrap();
        assert_eq!(d.core_nodes, vec![mi(3, 0), mi(2, 2), mi(0, 3)]);
        assert_eq!(d.lines.len(), 2);
        assert_eq!(d.kappas, vec![1, 1]);
        assert!(d.is_concave());
        assert!(!d.is_subordinate(&mi(2, 2)));
        assert!(d.is_subordinate(&mi(1, 1)));
        assert_eq!(d.extended_nodes, (mi(3, 0), mi(0, 3)));
    }

    #[test]
    fn single_point() {
        let d = build_diagram(&[DiffOperator::identity()]).unwrap();
        assert!(d.lines.is_empty());
        assert_eq!(d.core_nodes, vec![mi(0, 0)]);
        assert_eq!(d.extended_nodes, (mi(0, 0), mi(0, 0)));
    }

    #[test]
    fn empty_is_error() {
        assert_eq!(build_diagram(&[DiffOperator::zero()]), Err(Error::EmptyCollection));
    }

    #[test]
    fn collinear_lattice_points_and_kappa() {
        let q = DiffOperator::d1().add(&DiffOperator::d2()).pow(2);
        let d = build_diagram(std::slice::from_ref(&q)).unwrap();
        assert_eq!(d.lines.len(), 1);
        assert_eq!(d.core_nodes, vec![mi(2, 0), mi(0, 2)]);
        assert_eq!(d.kappas, vec![2]);
        assert!(d.on_core(&mi(1, 1)));
        assert_eq!(senior_part(&q, &d.lines[0]).unwrap(), q);
    }

    #[test]
    fn senior_parts() {
        let line = AdmissibleLine::from_intercepts(Ratio::from_integer(1), Ratio::from_integer(1));
        let op = DiffOperator::d1().add(&DiffOperator::identity());
        assert_eq!(senior_part(&op, &line).unwrap(), DiffOperator::d1());
        let line2 = AdmissibleLine::from_intercepts(Ratio::from_integer(2), Ratio::from_integer(2));
        let lin = DiffOperator::d1()
            .scale(&ExactComplex::from_int(2))
            .add(&DiffOperator::d2());
        assert!(senior_part(&lin, &line2).unwrap().is_zero());
        assert_eq!(
            senior_part(&DiffOperator::dmono(2, 0), &line),
            Err(Error::AboveLine(mi(2, 0)))
        );
    }

    #[test]
    fn principal_parts() {
        let ops = vec![
            DiffOperator::dmono(2, 0).add(&DiffOperator::d1()),
            DiffOperator::identity(),
        ];
        let d = build_diagram(&ops).unwrap();
        assert_eq!(d.core_nodes, vec![mi(2, 0)]);
        assert_eq!(principal_part(&ops[0], &d).unwrap(), DiffOperator::dmono(2, 0));
        assert!(principal_part(&ops[1], &d).unwrap().is_zero());
        assert_eq!(
            principal_part(&DiffOperator::dmono(0, 1), &d),
            Err(Error::AboveDiagram(mi(0, 1)))
        );
    }

    #[test]
    fn fractional_intercepts() {
        let line = AdmissibleLine::from_intercepts(Ratio::new(5, 2), Ratio::new(5, 3));
        assert!(line.contains(&mi(1, 1)));
        let d = build_diagram(&ops_of(&[(2, 0), (1, 1), (0, 1)])).unwrap();
        assert_eq!(d.lines.len(), 1);
        assert_eq!(d.lines[0].a, Ratio::from_integer(2));
        assert_eq!(d.lines[0].b, Ratio::from_integer(2));
    }
}
