//! Gadget shapes and their distinguished perfect matchings, in 1-based
//! gadget labels.

/// A labeled cycle `1..=size` plus chords, with the labels wired to the
/// central vertex and to clause ports.
#[derive(Debug)]
pub struct GadgetShape {
    pub size: usize,
    pub chords: &'static [(usize, usize)],
    /// Labels adjacent to the central vertex.
    pub entry: &'static [usize],
    /// Labels adjacent to ports of clauses containing the positive literal.
    pub positive: &'static [usize],
    pub negative: &'static [usize],
}

impl GadgetShape {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (1..=self.size).map(|i| (i, i % self.size + 1)).collect();
        e.extend_from_slice(self.chords);
        e
    }

    pub fn ports(&self, positive: bool) -> &'static [usize] {
        if positive {
            self.positive
        } else {
            self.negative
        }
    }
}

/// 12-cycle crossed by (2,10) and (3,11). Universal variables of the
/// diameter construction and the first existential block of the radius one.
pub const CROSSED_12: GadgetShape = GadgetShape {
    size: 12,
    chords: &[(2, 10), (3, 11)],
    entry: &[1],
    positive: &[4, 10],
    negative: &[3, 9],
};

/// Plain 12-cycle entered from either 1 or 12.
pub const TWO_DOOR_12: GadgetShape = GadgetShape {
    size: 12,
    chords: &[],
    entry: &[1, 12],
    positive: &[2, 10],
    negative: &[3, 11],
};

/// 14-cycle with two crossings, for universal variables of the radius
/// construction.
pub const DOUBLE_CROSSED_14: GadgetShape = GadgetShape {
    size: 14,
    chords: &[(2, 12), (3, 11), (4, 12), (3, 13)],
    entry: &[1],
    positive: &[4, 10],
    negative: &[5, 11],
};

/// Clause 4-cycle; label 1 is the port.
pub const CLAUSE_4: GadgetShape = GadgetShape {
    size: 4,
    chords: &[],
    entry: &[],
    positive: &[],
    negative: &[],
};

pub const CLAUSE_PORT: usize = 1;

/// `(1,2),(3,4),...` when `shift` is false, `(2,3),...,(size,1)` otherwise.
pub fn rim_matching(size: usize, shift: bool) -> Vec<(usize, usize)> {
    let s = usize::from(shift);
    (0..size / 2)
        .map(|i| (2 * i + 1 + s, (2 * i + 1 + s) % size + 1))
        .collect()
}

/// With the (1,2)-rim matching, forms the crossed 12-cycle
/// 1-2-10-9-8-7-6-5-4-3-11-12.
pub const CROSSED_12_DIAGONAL: [(usize, usize); 6] = [(1, 12), (2, 10), (3, 11), (4, 5), (6, 7), (8, 9)];

/// With the (1,2)-rim matching: one crossing, 1-2-12-11-...-4-3-13-14.
/// With [`DOUBLE_CROSSED_14_INNER`]: two crossings, 1-2-12-4-5-...-11-3-13-14.
pub const DOUBLE_CROSSED_14_OUTER: [(usize, usize); 7] =
    [(1, 14), (2, 12), (3, 13), (4, 5), (6, 7), (8, 9), (10, 11)];

/// With the (2,3)-rim matching: one crossing, 1-2-3-11-...-5-4-12-13-14.
pub const DOUBLE_CROSSED_14_INNER: [(usize, usize); 7] =
    [(1, 2), (3, 11), (4, 12), (5, 6), (7, 8), (9, 10), (13, 14)];

/// Whether two perfect matchings of labels `1..=size` differ everywhere and
/// their union is one cycle through all labels.
pub fn union_is_single_cycle(size: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    let mate = |m: &[(usize, usize)]| {
        let mut p = vec![0usize; size + 1];
        for &(x, y) in m {
            p[x] = y;
            p[y] = x;
        }
        p
    };
    let (pa, pb) = (mate(a), mate(b));
    if (1..=size).any(|v| pa[v] == 0 || pb[v] == 0 || pa[v] == pb[v]) {
        return false;
    }
    let mut cur = 1;
    let mut steps = 0;
    loop {
        cur = if steps % 2 == 0 { pa[cur] } else { pb[cur] };
        steps += 1;
        if cur == 1 {
            return steps == size;
        }
    }
}

/// Number of times the alternating cycle formed by `a` and `b` uses a
/// chord; the gadgets' crossings come in chord pairs.
pub fn crossings(shape: &GadgetShape, a: &[(usize, usize)], b: &[(usize, usize)]) -> usize {
    let chord = |&(x, y): &(usize, usize)| {
        shape
            .chords
            .iter()
            .any(|&(p, q)| (p, q) == (x, y) || (q, p) == (x, y))
    };
    (a.iter().filter(|e| chord(e)).count() + b.iter().filter(|e| chord(e)).count()) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All perfect matchings of a gadget by brute force.
    fn perfect_matchings(shape: &GadgetShape) -> Vec<Vec<(usize, usize)>> {
        fn rec(edges: &[(usize, usize)], used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            let Some(v) = (1..used.len()).find(|&v| !used[v]) else {
                let mut m = cur.clone();
                m.sort();
                out.push(m);
                return;
            };
            for &(a, b) in edges {
                let u = if a == v { b } else if b == v { a } else { continue };
                if used[u] {
                    continue;
                }
                used[v] = true;
                used[u] = true;
                cur.push((a.min(b), a.max(b)));
                rec(edges, used, cur, out);
                cur.pop();
                used[v] = false;
                used[u] = false;
            }
        }
        let mut out = Vec::new();
        rec(&shape.edges(), &mut vec![false; shape.size + 1], &mut Vec::new(), &mut out);
        out
    }

    fn norm(m: &[(usize, usize)]) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = m.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort();
        v
    }

    #[test]
    fn rim_matchings() {
        assert_eq!(rim_matching(4, false), vec![(1, 2), (3, 4)]);
        assert_eq!(rim_matching(4, true), vec![(2, 3), (4, 1)]);
    }

    #[test]
    fn crossed_12_has_three_perfect_matchings() {
        let pms = perfect_matchings(&CROSSED_12);
        let expected = vec![
            norm(&rim_matching(12, false)),
            norm(&rim_matching(12, true)),
            norm(&CROSSED_12_DIAGONAL),
        ];
        assert_eq!(pms.len(), 3);
        for e in &expected {
            assert!(pms.contains(e));
        }
        let odd = rim_matching(12, false);
        assert!(union_is_single_cycle(12, &odd, &rim_matching(12, true)));
        assert!(union_is_single_cycle(12, &odd, &CROSSED_12_DIAGONAL));
        assert_eq!(crossings(&CROSSED_12, &odd, &CROSSED_12_DIAGONAL), 1);
        // the remaining pair leaves four happy edges and a 4-cycle
        assert!(!union_is_single_cycle(12, &rim_matching(12, true), &CROSSED_12_DIAGONAL));
    }

    #[test]
    fn double_crossed_14_unions() {
        let pms = perfect_matchings(&DOUBLE_CROSSED_14);
        assert_eq!(pms.len(), 4);
        let o = rim_matching(14, false);
        let e = rim_matching(14, true);
        let x = DOUBLE_CROSSED_14_OUTER;
        let y = DOUBLE_CROSSED_14_INNER;
        for m in [&o[..], &e[..], &x[..], &y[..]] {
            assert!(pms.contains(&norm(m)));
        }
        let s = &DOUBLE_CROSSED_14;
        assert!(union_is_single_cycle(14, &o, &e) && crossings(s, &o, &e) == 0);
        assert!(union_is_single_cycle(14, &o, &x) && crossings(s, &o, &x) == 1);
        assert!(union_is_single_cycle(14, &y, &e) && crossings(s, &y, &e) == 1);
        assert!(union_is_single_cycle(14, &y, &x) && crossings(s, &y, &x) == 2);
        assert!(!union_is_single_cycle(14, &o, &y));
        assert!(!union_is_single_cycle(14, &e, &x));
        // (2,12) and (3,11) never appear together
        assert!(!pms.iter().any(|m| m.contains(&(2, 12)) && m.contains(&(3, 11))));
    }

    #[test]
    fn two_door_12_has_two_perfect_matchings() {
        assert_eq!(perfect_matchings(&TWO_DOOR_12).len(), 2);
    }
}
