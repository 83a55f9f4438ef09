//! Sorted-vector polynomials under a fixed term order and the Buchberger
//! completion loop.

use std::cmp::Ordering;

use crate::polysys::{Coeff, Monomial, MultiPoly};

use super::{Budget, GbStats, OrderKind, TermOrder};

/// Exponent vector in order positions (position 0 is the most significant
/// variable), with cached total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mono {
    pub deg: u32,
    pub e: Vec<u32>,
}

impl Mono {
    fn mul(&self, o: &Mono) -> Mono {
        Mono {
            deg: self.deg + o.deg,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(),
        }
    }

    fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && self.e.iter().zip(&o.e).all(|(a, b)| a <= b)
    }

    fn div(&self, o: &Mono) -> Mono {
        Mono {
            deg: self.deg - o.deg,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect(),
        }
    }

    fn lcm(&self, o: &Mono) -> Mono {
        let e: Vec<u32> = self.e.iter().zip(&o.e).map(|(a, b)| *a.max(b)).collect();
        Mono { deg: e.iter().sum(), e }
    }

    fn coprime(&self, o: &Mono) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn is_one(&self) -> bool {
        self.deg == 0
    }
}

pub(crate) fn cmp(kind: OrderKind, a: &Mono, b: &Mono) -> Ordering {
    match kind {
        OrderKind::Lex => a.e.cmp(&b.e),
        OrderKind::DegRevLex => a.deg.cmp(&b.deg).then_with(|| {
            for (x, y) in a.e.iter().zip(&b.e).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }),
    }
}

/// Terms sorted strictly descending; no zero coefficients.
pub(crate) type Terms<C> = Vec<(Mono, C)>;

pub(crate) fn to_terms<C: Coeff>(p: &MultiPoly<C>, order: &TermOrder) -> Terms<C> {
    let mut t: Terms<C> = p
        .terms()
        .map(|(m, c)| {
            let e: Vec<u32> = order.perm.iter().map(|&v| m.exponents()[v]).collect();
            (Mono { deg: m.degree(), e }, c.clone())
        })
        .collect();
    t.sort_by(|a, b| cmp(order.kind, &b.0, &a.0));
    t
}

pub(crate) fn from_terms<C: Coeff>(t: &Terms<C>, template: &MultiPoly<C>, order: &TermOrder) -> MultiPoly<C> {
    let n = order.perm.len();
    MultiPoly::from_terms(
        template.ring(),
        t.iter().map(|(m, c)| {
            let mut e = vec![0; n];
            for (pos, &v) in order.perm.iter().enumerate() {
                e[v] = m.e[pos];
            }
            (Monomial::from_exponents(e), c.clone())
        }),
    )
}

/// `p - c·q·g`, where the leading terms are known to cancel when `p[0]`
/// is the term being reduced.
fn sub_scaled<C: Coeff>(kind: OrderKind, p: &[(Mono, C)], g: &[(Mono, C)], q: &Mono, c: &C) -> Terms<C> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < g.len() {
        if j == g.len() {
            out.extend_from_slice(&p[i..]);
            break;
        }
        let gm = g[j].0.mul(q);
        if i == p.len() {
            out.push((gm, -(c.clone() * g[j].1.clone())));
            j += 1;
            continue;
        }
        match cmp(kind, &p[i].0, &gm) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gm, -(c.clone() * g[j].1.clone())));
                j += 1;
            }
            Ordering::Equal => {
                let v = p[i].1.clone() - c.clone() * g[j].1.clone();
                if !v.is_zero() {
                    out.push((gm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) struct StepLimit<'a> {
    pub steps: &'a mut u64,
    pub max: u64,
}

/// Full reduction of `p` by `basis` (every term, not only the leading one).
/// Returns `None` when the step budget runs out.
pub(crate) fn reduce<C: Coeff>(
    kind: OrderKind,
    mut p: Terms<C>,
    basis: &[&Terms<C>],
    mut limit: Option<&mut StepLimit<'_>>,
) -> Option<Terms<C>> {
    let mut rem: Terms<C> = Vec::new();
    loop {
        if p.is_empty() {
            return Some(rem);
        }
        let (lm, lc) = (&p[0].0, &p[0].1);
        let reducer = basis.iter().find(|g| g[0].0.divides(lm));
        match reducer {
            Some(g) => {
                if let Some(l) = limit.as_deref_mut() {
                    *l.steps += 1;
                    if *l.steps > l.max {
                        return None;
                    }
                }
                let q = lm.div(&g[0].0);
                let c = lc.checked_div(&g[0].1).expect("nonzero leading coefficient");
                p = sub_scaled(kind, &p, g, &q, &c);
            }
            None => {
                // move the irreducible leading term to the remainder
                let mut it = p.into_iter();
                rem.push(it.next().expect("nonempty"));
                p = it.collect();
            }
        }
    }
}

pub(crate) fn normalize<C: Coeff>(p: &mut Terms<C>) {
    if p.is_empty() {
        return;
    }
    let coeffs: Vec<&C> = p.iter().map(|(_, c)| c).collect();
    let f = C::content_normalizer(&coeffs);
    if f != C::one() {
        for (_, c) in p.iter_mut() {
            *c = c.clone() * f.clone();
        }
    }
}

fn spoly<C: Coeff>(kind: OrderKind, f: &Terms<C>, g: &Terms<C>, lcm: &Mono) -> Terms<C> {
    let qf = lcm.div(&f[0].0);
    let qg = lcm.div(&g[0].0);
    // (lcm/lm f)·f/lc f − (lcm/lm g)·g/lc g, scaled by lc f
    let c = f[0].1.checked_div(&g[0].1).expect("nonzero leading coefficient");
    let ff: Terms<C> = f.iter().map(|(m, v)| (m.mul(&qf), v.clone())).collect();
    sub_scaled(kind, &ff, g, &qg, &c)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

pub(crate) enum Outcome<C> {
    Done(Vec<Terms<C>>),
    OverBudget(Vec<Terms<C>>),
}

pub(crate) struct Engine<C> {
    kind: OrderKind,
    polys: Vec<Terms<C>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    pub stats: GbStats,
}

impl<C: Coeff> Engine<C> {
    pub fn new(kind: OrderKind) -> Self {
        Engine {
            kind,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
        }
    }

    fn active_refs(&self) -> Vec<&Terms<C>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    fn unit_basis(&self) -> Option<Vec<Terms<C>>> {
        self.polys
            .iter()
            .zip(&self.active)
            .find(|(p, a)| **a && p[0].0.is_one())
            .map(|(p, _)| vec![vec![(p[0].0.clone(), C::one())]])
    }

    /// Gebauer–Möller update with the new element at index `h`.
    fn update(&mut self, h: usize) {
        let lh = self.polys[h][0].0.clone();
        let olds: Vec<usize> = (0..h).filter(|&g| self.active[g]).collect();
        let mut cands: Vec<Pair> = olds
            .iter()
            .map(|&g| Pair {
                i: g,
                j: h,
                lcm: self.polys[g][0].0.lcm(&lh),
            })
            .collect();
        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = cands.pop() {
            let coprime = self.polys[p.i][0].0.coprime(&lh);
            let dominated = cands.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            } else {
                self.stats.chain_criterion += 1;
            }
        }
        let before = kept.len();
        kept.retain(|p| !self.polys[p.i][0].0.coprime(&lh));
        self.stats.product_criterion += (before - kept.len()) as u64;
        // old pairs whose lcm is a multiple of lt(h) with both new lcms different
        let polys = &self.polys;
        let before = self.pairs.len();
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && polys[p.i][0].0.lcm(&lh) != p.lcm
                && polys[p.j][0].0.lcm(&lh) != p.lcm)
        });
        self.stats.chain_criterion += (before - self.pairs.len()) as u64;
        self.pairs.extend(kept);
        for g in olds {
            if lh.divides(&self.polys[g][0].0) {
                self.active[g] = false;
            }
        }
    }

    fn push(&mut self, p: Terms<C>) -> usize {
        self.polys.push(p);
        self.active.push(true);
        let h = self.polys.len() - 1;
        self.update(h);
        h
    }

    /// Runs the completion. Inputs must be nonzero.
    pub fn run(mut self, inputs: Vec<Terms<C>>, budget: &Budget) -> (Outcome<C>, GbStats) {
        let mut steps = 0u64;
        for mut f in inputs {
            let reduced = {
                let basis = self.active_refs();
                let mut lim = StepLimit {
                    steps: &mut steps,
                    max: budget.max_steps,
                };
                reduce(self.kind, std::mem::take(&mut f), &basis, Some(&mut lim))
            };
            let Some(mut r) = reduced else {
                return self.finish_over(steps);
            };
            if r.is_empty() {
                continue;
            }
            normalize(&mut r);
            self.stats.max_degree_seen = self.stats.max_degree_seen.max(r[0].0.deg);
            self.push(r);
            if let Some(u) = self.unit_basis() {
                self.stats.reduction_steps = steps;
                self.stats.basis_size = 1;
                return (Outcome::Done(u), self.stats);
            }
        }
        while !self.pairs.is_empty() {
            let kind = self.kind;
            let k = (0..self.pairs.len())
                .min_by(|&a, &b| {
                    let (p, q) = (&self.pairs[a], &self.pairs[b]);
                    p.lcm
                        .deg
                        .cmp(&q.lcm.deg)
                        .then_with(|| cmp(kind, &p.lcm, &q.lcm))
                        .then_with(|| (p.i, p.j).cmp(&(q.i, q.j)))
                })
                .expect("nonempty");
            let pair = self.pairs.swap_remove(k);
            self.stats.pairs_reduced += 1;
            if pair.lcm.deg > budget.max_degree {
                self.pairs.push(pair);
                return self.finish_over(steps);
            }
            let s = spoly(kind, &self.polys[pair.i], &self.polys[pair.j], &pair.lcm);
            let reduced = {
                let basis = self.active_refs();
                let mut lim = StepLimit {
                    steps: &mut steps,
                    max: budget.max_steps,
                };
                reduce(kind, s, &basis, Some(&mut lim))
            };
            let Some(mut r) = reduced else {
                return self.finish_over(steps);
            };
            if r.is_empty() {
                self.stats.zero_reductions += 1;
                continue;
            }
            normalize(&mut r);
            self.stats.max_degree_seen = self.stats.max_degree_seen.max(r[0].0.deg);
            self.push(r);
            if let Some(u) = self.unit_basis() {
                self.stats.reduction_steps = steps;
                self.stats.basis_size = 1;
                return (Outcome::Done(u), self.stats);
            }
        }
        self.stats.reduction_steps = steps;
        let basis = self.reduced_basis();
        self.stats.basis_size = basis.len();
        (Outcome::Done(basis), self.stats)
    }

    fn finish_over(mut self, steps: u64) -> (Outcome<C>, GbStats) {
        self.stats.reduction_steps = steps;
        self.stats.pending_pairs = self.pairs.len();
        let partial: Vec<Terms<C>> = self.active_refs().into_iter().cloned().collect();
        self.stats.basis_size = partial.len();
        (Outcome::OverBudget(partial), self.stats)
    }

    /// Interreduced, monic, sorted by descending leading monomial.
    fn reduced_basis(&self) -> Vec<Terms<C>> {
        let mut g: Vec<Terms<C>> = self.active_refs().into_iter().cloned().collect();
        g.sort_by(|a, b| cmp(self.kind, &b[0].0, &a[0].0));
        let mut out = Vec::with_capacity(g.len());
        for k in 0..g.len() {
            let others: Vec<&Terms<C>> = g.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p).collect();
            let lead = g[k][0].clone();
            let tail = reduce(self.kind, g[k][1..].to_vec(), &others, None).expect("no limit");
            let mut p = vec![lead];
            p.extend(tail);
            let inv = C::one().checked_div(&p[0].1).expect("nonzero");
            for (_, c) in p.iter_mut() {
                *c = c.clone() * inv.clone();
            }
            out.push(p);
        }
        out
    }
}
