//! Non-crossing pairings of `2n` boundary points.
//!
//! Points `0..n` are the top row and `n..2n` the bottom row, both read left
//! to right. Going around the boundary, the top row comes first and the
//! bottom row is traversed right to left.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarPairing {
    n: usize,
    partner: Vec<usize>,
}

impl PlanarPairing {
    /// Builds from a partner array, checking that it is a non-crossing
    /// perfect matching.
    pub fn from_partners(n: usize, partner: Vec<usize>) -> Option<Self> {
        if partner.len() != 2 * n {
            return None;
        }
        for (p, &q) in partner.iter().enumerate() {
            if q >= 2 * n || q == p || partner[q] != p {
                return None;
            }
        }
        let d = Self { n, partner };
        d.is_non_crossing().then_some(d)
    }

    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        Self { n, partner }
    }

    /// `E_i` (0-based): cups joining positions `i, i+1` on both rows.
    pub fn cup_cap(n: usize, i: usize) -> Self {
        assert!(i + 1 < n, "E_{i} needs at least {} strands", i + 2);
        let mut d = Self::identity(n);
        d.partner[i] = i + 1;
        d.partner[i + 1] = i;
        d.partner[n + i] = n + i + 1;
        d.partner[n + i + 1] = n + i;
        d
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    /// Pairs `(p, q)` with `p < q`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&p| p < self.partner[p])
            .map(|p| (p, self.partner[p]))
            .collect()
    }

    fn boundary_position(&self, p: usize) -> usize {
        if p < self.n {
            p
        } else {
            3 * self.n - 1 - p
        }
    }

    fn is_non_crossing(&self) -> bool {
        let chords: Vec<(usize, usize)> = self
            .pairs()
            .into_iter()
            .map(|(p, q)| {
                let (a, b) = (self.boundary_position(p), self.boundary_position(q));
                (a.min(b), a.max(b))
            })
            .collect();
        chords.iter().all(|&(a, b)| {
            chords
                .iter()
                .all(|&(c, d)| !(a < c && c < b && b < d) && !(c < a && a < d && d < b))
        })
    }

    /// Stacks `self` on top of `other`; returns the product diagram and the
    /// number of closed loops formed in the middle.
    pub fn compose(&self, other: &Self) -> (Self, usize) {
        assert_eq!(self.n, other.n, "strand counts differ");
        let n = self.n;
        let mut partner = vec![usize::MAX; 2 * n];
        let mut middle_seen = vec![false; n];

        // Follow a path from a boundary point of the product until it exits.
        // State: (in_top_diagram, point within that diagram).
        let exit = |start_top: bool, start: usize, seen: &mut [bool]| -> usize {
            let (mut in_top, mut p) = (start_top, start);
            loop {
                let q = if in_top { self.partner[p] } else { other.partner[p] };
                if in_top {
                    if q < n {
                        return q;
                    }
                    seen[q - n] = true;
                    in_top = false;
                    p = q - n;
                } else {
                    if q >= n {
                        return q;
                    }
                    seen[q] = true;
                    in_top = true;
                    p = q + n;
                }
            }
        };

        for p in 0..2 * n {
            if partner[p] != usize::MAX {
                continue;
            }
            let q = if p < n {
                exit(true, p, &mut middle_seen)
            } else {
                exit(false, p, &mut middle_seen)
            };
            partner[p] = q;
            partner[q] = p;
        }

        let mut loops = 0;
        for start in 0..n {
            if middle_seen[start] {
                continue;
            }
            loops += 1;
            let mut m = start;
            loop {
                middle_seen[m] = true;
                // down through the lower diagram's top row, back up through the upper diagram's bottom row
                let below = other.partner[m];
                debug_assert!(below < n);
                middle_seen[below] = true;
                let above = self.partner[below + n];
                debug_assert!(above >= n);
                m = above - n;
                if m == start {
                    break;
                }
            }
        }
        (Self { n, partner }, loops)
    }

    /// Loops in the trace closure (top `i` joined to bottom `i`).
    pub fn closure_loops(&self) -> usize {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                let q = self.partner[p];
                seen[q] = true;
                p = if q < n { q + n } else { q - n };
            }
        }
        loops
    }

    /// Every non-crossing pairing on `2n` points, in sorted order.
    pub fn enumerate(n: usize) -> Vec<Self> {
        // matchings of boundary positions 0..2n, then mapped back to points
        fn rec(positions: &[usize], out: &mut Vec<Vec<(usize, usize)>>) {
            if positions.is_empty() {
                out.push(Vec::new());
                return;
            }
            let first = positions[0];
            for k in (1..positions.len()).step_by(2) {
                let mut inner = Vec::new();
                rec(&positions[1..k], &mut inner);
                let mut outer = Vec::new();
                rec(&positions[k + 1..], &mut outer);
                for a in &inner {
                    for b in &outer {
                        let mut m = vec![(first, positions[k])];
                        m.extend_from_slice(a);
                        m.extend_from_slice(b);
                        out.push(m);
                    }
                }
            }
        }
        let positions: Vec<usize> = (0..2 * n).collect();
        let mut matchings = Vec::new();
        rec(&positions, &mut matchings);
        let point = |pos: usize| if pos < n { pos } else { 3 * n - 1 - pos };
        let mut out: Vec<Self> = matchings
            .into_iter()
            .map(|m| {
                let mut partner = vec![0; 2 * n];
                for (a, b) in m {
                    partner[point(a)] = point(b);
                    partner[point(b)] = point(a);
                }
                Self { n, partner }
            })
            .collect();
        out.sort();
        out
    }
}

impl fmt::Debug for PlanarPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let name = |p: usize| if p < n { format!("t{}", p + 1) } else { format!("b{}", p - n + 1) };
        let pairs: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(p, q)| format!("{}-{}", name(p), name(q)))
            .collect();
        write!(f, "[{}]", pairs.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let catalan = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in catalan.iter().enumerate() {
            let all = PlanarPairing::enumerate(n);
            assert_eq!(all.len(), c, "n = {n}");
            assert!(all.iter().all(|d| PlanarPairing::from_partners(n, d.partner.clone()).is_some()));
        }
    }

    #[test]
    fn crossing_pairings_are_rejected() {
        // the permutation swapping two strands crosses
        assert!(PlanarPairing::from_partners(2, vec![3, 2, 1, 0]).is_none());
        assert!(PlanarPairing::from_partners(2, vec![2, 3, 0, 1]).is_some());
        assert!(PlanarPairing::from_partners(2, vec![1, 0, 3, 2]).is_some());
        assert!(PlanarPairing::from_partners(2, vec![0, 1, 2, 3]).is_none());
    }

    #[test]
    fn composition_rules() {
        let e1 = PlanarPairing::cup_cap(2, 0);
        assert_eq!(e1.compose(&e1), (e1.clone(), 1));
        let id = PlanarPairing::identity(3);
        let (a, b) = (PlanarPairing::cup_cap(3, 0), PlanarPairing::cup_cap(3, 1));
        let (ab, l1) = a.compose(&b);
        let (aba, l2) = ab.compose(&a);
        assert_eq!((aba, l1 + l2), (a.clone(), 0));
        assert_eq!(id.compose(&b), (b.clone(), 0));
        assert_eq!(b.compose(&id), (b, 0));
    }

    #[test]
    fn closures() {
        assert_eq!(PlanarPairing::identity(3).closure_loops(), 3);
        assert_eq!(PlanarPairing::cup_cap(2, 0).closure_loops(), 1);
        assert_eq!(PlanarPairing::cup_cap(3, 1).closure_loops(), 2);
    }
}
