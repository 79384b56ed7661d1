//! Integer-only reimplementation of the balance predicates, kept
//! deliberately naive: every nonempty proper vertex subset by bitmask,
//! inequalities cross-multiplied so no rational type is involved. This
//! is the ground truth the library's pruned implementations are
//! compared against.

use univjac_core::dualgraph::DualGraph;

pub struct OracleGraph {
    n: usize,
    genus: Vec<i64>,
    edges: Vec<(usize, usize)>,
    /// 2g - 2 of the total (arithmetic) genus; positive for every graph
    /// the tests feed in.
    t: i64,
}

#[allow(dead_code)]
impl OracleGraph {
    pub fn of(graph: &DualGraph) -> Self {
        let n = graph.n_vertices();
        assert!(n <= 62, "oracle uses u64 bitmasks");
        let genus: Vec<i64> = (0..n).map(|v| graph.genus(v) as i64).collect();
        let edges = graph.edges().to_vec();
        let total = genus.iter().sum::<i64>() + edges.len() as i64 - n as i64 + 1;
        OracleGraph {
            n,
            genus,
            edges,
            t: 2 * total - 2,
        }
    }

    fn in_mask(mask: u64, v: usize) -> bool {
        mask & (1 << v) != 0
    }

    /// Relative canonical degree and cut size of the subset.
    fn w_and_cut(&self, mask: u64) -> (i64, i64) {
        let mut w = 0i64;
        for v in 0..self.n {
            if Self::in_mask(mask, v) {
                w += 2 * self.genus[v] - 2;
            }
        }
        let mut cut = 0i64;
        for &(a, b) in &self.edges {
            let (ia, ib) = (Self::in_mask(mask, a), Self::in_mask(mask, b));
            w += ia as i64 + ib as i64;
            if ia != ib {
                cut += 1;
            }
        }
        (w, cut)
    }

    fn valence(&self, v: usize) -> i64 {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as i64 + (b == v) as i64)
            .sum()
    }

    fn exceptional(&self, v: usize) -> bool {
        self.genus[v] == 0
            && self.valence(v) == 2
            && !self.edges.contains(&(v, v))
    }

    fn subset_degree(md: &[i64], mask: u64) -> i64 {
        md.iter()
            .enumerate()
            .filter(|&(v, _)| Self::in_mask(mask, v))
            .map(|(_, &x)| x)
            .sum()
    }

    /// 2*t*lower <= 2*t*deg <= 2*t*upper with everything integral:
    /// lower/upper are d*w/t -+ cut/2.
    fn within_bounds(&self, d: i64, mask: u64, deg: i64) -> (bool, bool) {
        let (w, cut) = self.w_and_cut(mask);
        let scaled = 2 * deg * self.t;
        let at_lo = scaled == 2 * d * w - cut * self.t;
        let ok = 2 * d * w - cut * self.t <= scaled && scaled <= 2 * d * w + cut * self.t;
        (ok, at_lo)
    }

    pub fn properly_balanced(&self, md: &[i64]) -> bool {
        assert_eq!(md.len(), self.n);
        for v in 0..self.n {
            if self.exceptional(v) && md[v] != 1 {
                return false;
            }
        }
        let d: i64 = md.iter().sum();
        for mask in 1..(1u64 << self.n) - 1 {
            let deg = Self::subset_degree(md, mask);
            if !self.within_bounds(d, mask, deg).0 {
                return false;
            }
        }
        true
    }

    /// None when the input is not even properly balanced.
    pub fn strictly_balanced(&self, md: &[i64]) -> Option<bool> {
        if !self.properly_balanced(md) {
            return None;
        }
        let d: i64 = md.iter().sum();
        for mask in 1..(1u64 << self.n) - 1 {
            let deg = Self::subset_degree(md, mask);
            if !self.within_bounds(d, mask, deg).1 {
                continue;
            }
            for &(a, b) in &self.edges {
                if Self::in_mask(mask, a) != Self::in_mask(mask, b)
                    && !self.exceptional(a)
                    && !self.exceptional(b)
                {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// Integer interval each coordinate of a balanced multidegree must
    /// lie in: the singleton inequality, or exactly 1 on exceptional
    /// vertices. For a single vertex the only choice is d itself.
    fn coordinate_box(&self, d: i64) -> Vec<(i64, i64)> {
        if self.n == 1 {
            return vec![(d, d)];
        }
        (0..self.n)
            .map(|v| {
                if self.exceptional(v) {
                    return (1, 1);
                }
                let (w, cut) = self.w_and_cut(1 << v);
                let denom = 2 * self.t;
                let lo_num = 2 * d * w - cut * self.t;
                let hi_num = 2 * d * w + cut * self.t;
                let lo = (lo_num + denom - 1).div_euclid(denom);
                let hi = hi_num.div_euclid(denom);
                (lo, hi)
            })
            .collect()
    }

    /// Full product-box scan filtered by the predicate, in lex order.
    pub fn enumerate(&self, d: i64, strict: bool) -> Vec<Vec<i64>> {
        let boxes = self.coordinate_box(d);
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.n);
        self.scan(&boxes, d, strict, &mut current, &mut out);
        out
    }

    fn scan(
        &self,
        boxes: &[(i64, i64)],
        d: i64,
        strict: bool,
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if current.len() == self.n {
            if current.iter().sum::<i64>() != d {
                return;
            }
            let keep = if strict {
                self.strictly_balanced(current) == Some(true)
            } else {
                self.properly_balanced(current)
            };
            if keep {
                out.push(current.clone());
            }
            return;
        }
        let (lo, hi) = boxes[current.len()];
        for x in lo..=hi {
            current.push(x);
            self.scan(boxes, d, strict, current, out);
            current.pop();
        }
    }
}
