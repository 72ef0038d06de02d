//! Truncated noncommutative Gröbner bases by overlap completion.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use thiserror::Error;

use crate::freealg::{MonomialOrder, NcPoly, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("truncation degree {0} is below the maximal relation degree {1}")]
    TruncationTooSmall(usize, usize),
    #[error("degree {0} exceeds the truncation degree {1}")]
    DegreeExceedsTruncation(usize, usize),
    #[error("relation is not homogeneous")]
    NotHomogeneous,
}

/// A rewrite rule `lead → lead − poly`; `poly` is monic with leading word `lead`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Word,
    pub poly: NcPoly,
}

enum Task {
    Poly(NcPoly),
    Pair(usize, usize, usize),
}

/// Completion state in index order. Shared by the graded (homogeneous)
/// front end below and by the finite-dimensional closure in `findim`.
#[derive(Clone, Default)]
pub(crate) struct Engine {
    rules: Vec<Option<Rule>>,
    index: HashMap<Vec<u8>, usize>,
    lens: BTreeSet<usize>,
}

impl Engine {
    pub(crate) fn new() -> Engine {
        Engine::default()
    }

    pub(crate) fn alive(&self) -> impl Iterator<Item = (usize, &Rule)> {
        self.rules.iter().enumerate().filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }

    pub(crate) fn rules(&self) -> Vec<Rule> {
        let mut v: Vec<Rule> = self.alive().map(|(_, r)| r.clone()).collect();
        v.sort_by(|a, b| a.lead.cmp(&b.lead));
        v
    }

    fn find_reducer(&self, w: &[u8]) -> Option<(usize, usize)> {
        for s in 0..=w.len() {
            for &l in &self.lens {
                if s + l > w.len() {
                    break;
                }
                if let Some(&r) = self.index.get(&w[s..s + l]) {
                    return Some((s, r));
                }
            }
        }
        None
    }

    pub(crate) fn is_reducible(&self, w: &[u8]) -> bool {
        self.find_reducer(w).is_some()
    }

    /// Whether some suffix of `w` is a leading word.
    pub(crate) fn suffix_reducible(&self, w: &[u8]) -> bool {
        self.lens.iter().any(|&l| l <= w.len() && self.index.contains_key(&w[w.len() - l..]))
    }

    pub(crate) fn reduce(&self, p: &NcPoly) -> NcPoly {
        let mut work = p.terms.clone();
        let mut out = BTreeMap::new();
        while let Some((w, c)) = work.pop_last() {
            match self.find_reducer(&w.0) {
                None => {
                    out.insert(w, c);
                }
                Some((s, r)) => {
                    let rule = self.rules[r].as_ref().unwrap();
                    let left = &w.0[..s];
                    let right = &w.0[s + rule.lead.len()..];
                    for (tw, tc) in rule.poly.terms.iter() {
                        if tw == &rule.lead {
                            continue;
                        }
                        let nw = Word::wrap(left, &tw.0, right);
                        let delta = -(&c * tc);
                        match work.entry(nw) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(delta);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                *e.get_mut() += &delta;
                                if e.get().is_zero() {
                                    e.remove();
                                }
                            }
                        }
                    }
                }
            }
        }
        NcPoly { terms: out }
    }

    /// Insert a reduced nonzero polynomial; returns its id and the
    /// polynomials of rules made redundant (to be re-queued).
    fn insert(&mut self, p: NcPoly) -> (usize, Vec<NcPoly>) {
        let p = p.monic();
        let lead = p.leading().unwrap().0.clone();
        let mut requeue = Vec::new();
        for slot in self.rules.iter_mut() {
            if let Some(r) = slot {
                if r.lead.contains(&lead) {
                    self.index.remove(&r.lead.0);
                    requeue.push(r.poly.clone());
                    *slot = None;
                }
            }
        }
        let id = self.rules.len();
        self.index.insert(lead.0.clone(), id);
        self.rules.push(Some(Rule { lead, poly: p }));
        self.lens = self.alive().map(|(_, r)| r.lead.len()).collect();
        (id, requeue)
    }

    fn overlaps(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let (ra, rb) = (self.rules[a].as_ref().unwrap(), self.rules[b].as_ref().unwrap());
        let (la, lb) = (ra.lead.len(), rb.lead.len());
        let mut v = Vec::new();
        for k in 1..la.min(lb) {
            if ra.lead.0[la - k..] == rb.lead.0[..k] {
                v.push((k, la + lb - k));
            }
        }
        v
    }

    fn spoly(&self, a: usize, b: usize, k: usize) -> Option<NcPoly> {
        let ra = self.rules[a].as_ref()?;
        let rb = self.rules[b].as_ref()?;
        let la = ra.lead.len();
        if la <= k || rb.lead.len() <= k || ra.lead.0[la - k..] != rb.lead.0[..k] {
            return None;
        }
        let left = ra.poly.wrap(&[], &rb.lead.0[k..]);
        let right = rb.poly.wrap(&ra.lead.0[..la - k], &[]);
        Some(left.sub(&right))
    }

    /// Run completion on `inputs`, resolving every overlap whose word length
    /// is at most `max_deg`. Returns false when some overlap was skipped
    /// because it exceeded the bound.
    pub(crate) fn run(&mut self, inputs: Vec<NcPoly>, max_deg: usize) -> bool {
        let mut tasks: Vec<Option<Task>> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
        let push = |tasks: &mut Vec<Option<Task>>, heap: &mut BinaryHeap<Reverse<(usize, usize)>>, deg: usize, t: Task| {
            heap.push(Reverse((deg, tasks.len())));
            tasks.push(Some(t));
        };
        for p in inputs {
            if let Some(d) = p.degree() {
                push(&mut tasks, &mut heap, d, Task::Poly(p));
            }
        }
        let mut complete = true;
        loop {
            while let Some(Reverse((deg, t))) = heap.pop() {
                if deg > max_deg {
                    complete = false;
                    continue;
                }
                let p = match tasks[t].take().unwrap() {
                    Task::Poly(p) => p,
                    Task::Pair(a, b, k) => match self.spoly(a, b, k) {
                        Some(p) => p,
                        None => continue,
                    },
                };
                let r = self.reduce(&p);
                if r.is_zero() {
                    continue;
                }
                let (id, requeue) = self.insert(r);
                for q in requeue {
                    let d = q.degree().unwrap();
                    push(&mut tasks, &mut heap, d, Task::Poly(q));
                }
                let others: Vec<usize> = self.alive().map(|(i, _)| i).collect();
                for j in others {
                    for (k, d) in self.overlaps(id, j) {
                        push(&mut tasks, &mut heap, d, Task::Pair(id, j, k));
                    }
                    if j != id {
                        for (k, d) in self.overlaps(j, id) {
                            push(&mut tasks, &mut heap, d, Task::Pair(j, id, k));
                        }
                    }
                }
            }
            // Final sweep over all surviving pairs; resumes if anything is left.
            let ids: Vec<usize> = self.alive().map(|(i, _)| i).collect();
            let mut pending = false;
            for &a in &ids {
                for &b in &ids {
                    for (k, d) in self.overlaps(a, b) {
                        if d > max_deg {
                            complete = false;
                            continue;
                        }
                        let s = self.spoly(a, b, k).unwrap();
                        if !self.reduce(&s).is_zero() {
                            push(&mut tasks, &mut heap, d, Task::Pair(a, b, k));
                            pending = true;
                        }
                    }
                }
            }
            if !pending {
                break;
            }
        }
        self.reduce_tails();
        complete
    }

    fn reduce_tails(&mut self) {
        let ids: Vec<usize> = self.alive().map(|(i, _)| i).collect();
        for id in ids {
            let rule = self.rules[id].take().unwrap();
            let lead_term = NcPoly::monomial(rule.lead.clone(), crate::scalar::Scalar::one());
            let tail = rule.poly.sub(&lead_term);
            self.index.remove(&rule.lead.0);
            let new_tail = self.reduce(&tail);
            self.index.insert(rule.lead.0.clone(), id);
            self.rules[id] = Some(Rule { lead: rule.lead, poly: lead_term.add(&new_tail) });
        }
    }
}

/// A degree-truncated confluent rewrite system for a homogeneous ideal.
#[derive(Clone)]
pub struct RewriteSystem {
    pub n: usize,
    pub order: MonomialOrder,
    engine: Engine,
    pub truncation: usize,
    pub confluent_up_to: usize,
}

impl std::fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RewriteSystem")
            .field("n", &self.n)
            .field("rules", &self.engine.alive().count())
            .field("truncation", &self.truncation)
            .finish()
    }
}

/// Complete homogeneous relations in `n` generators up to degree `d`.
pub fn complete(relations: &[NcPoly], n: usize, d: usize, order: &MonomialOrder) -> Result<RewriteSystem, RewriteError> {
    let mut max = 0;
    for r in relations {
        if !r.is_homogeneous() {
            return Err(RewriteError::NotHomogeneous);
        }
        max = max.max(r.degree().unwrap_or(0));
    }
    if d < max {
        return Err(RewriteError::TruncationTooSmall(d, max));
    }
    let mut engine = Engine::new();
    engine.run(relations.iter().map(|r| order.relabel(r)).collect(), d);
    Ok(RewriteSystem { n, order: order.clone(), engine, truncation: d, confluent_up_to: d })
}

impl RewriteSystem {
    /// Rules in the caller's generator labels.
    pub fn rules(&self) -> Vec<Rule> {
        self.engine
            .rules()
            .into_iter()
            .map(|r| Rule { lead: self.order.unlabel_word(&r.lead), poly: self.order.unlabel(&r.poly) })
            .collect()
    }

    pub fn normal_form(&self, f: &NcPoly) -> Result<NcPoly, RewriteError> {
        if let Some(d) = f.degree() {
            if d > self.confluent_up_to {
                return Err(RewriteError::DegreeExceedsTruncation(d, self.confluent_up_to));
            }
        }
        Ok(self.order.unlabel(&self.engine.reduce(&self.order.relabel(f))))
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        !self.engine.is_reducible(&self.order.relabel_word(w).0)
    }

    /// Reduced words of each degree 0..=d, ascending in the system's order.
    pub fn graded_bases(&self, d: usize) -> Result<Vec<Vec<Word>>, RewriteError> {
        if d > self.confluent_up_to {
            return Err(RewriteError::DegreeExceedsTruncation(d, self.confluent_up_to));
        }
        let mut levels: Vec<Vec<Word>> = vec![vec![Word::empty()]];
        if self.engine.is_reducible(&[]) {
            levels[0].clear();
        }
        for _ in 0..d {
            let prev = levels.last().unwrap();
            let mut next = Vec::new();
            for w in prev {
                for g in 0..self.n as u8 {
                    let mut v = w.0.clone();
                    v.push(g);
                    if !self.engine.suffix_reducible(&v) {
                        next.push(Word(v));
                    }
                }
            }
            next.sort();
            levels.push(next);
        }
        Ok(levels.into_iter().map(|l| l.iter().map(|w| self.order.unlabel_word(w)).collect()).collect())
    }

    pub fn graded_basis(&self, d: usize) -> Result<Vec<Word>, RewriteError> {
        Ok(self.graded_bases(d)?.pop().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn w(ix: &[usize]) -> NcPoly {
        NcPoly::word(ix)
    }

    fn comm(i: usize, j: usize) -> NcPoly {
        w(&[i, j]).sub(&w(&[j, i]))
    }

    #[test]
    fn monomial_relation_has_no_overlaps() {
        let rs = complete(&[w(&[0, 1])], 2, 5, &MonomialOrder::natural(2)).unwrap();
        assert_eq!(rs.rules().len(), 1);
        assert_eq!(rs.normal_form(&w(&[1, 0, 1, 1])).unwrap(), NcPoly::zero());
        // words avoiding xy: y^a x^b
        assert_eq!(rs.graded_basis(4).unwrap().len(), 5);
    }

    #[test]
    fn commutative_polynomial_ring_dims() {
        let rels = vec![comm(0, 1), comm(1, 2), comm(2, 0)];
        let rs = complete(&rels, 3, 5, &MonomialOrder::natural(3)).unwrap();
        let dims: Vec<usize> = rs.graded_bases(5).unwrap().iter().map(Vec::len).collect();
        assert_eq!(dims, vec![1, 3, 6, 10, 15, 21]);
        assert_eq!(rs.rules().len(), 3);
    }

    #[test]
    fn type_t1_example_is_already_a_basis() {
        // α = β = 0, γ = 1: xy − yx, xz − zx + yx, yz − zy + xy
        let rels = vec![comm(0, 1), comm(0, 2).add(&w(&[1, 0])), comm(1, 2).add(&w(&[0, 1]))];
        let rs = complete(&rels, 3, 5, &MonomialOrder::natural(3)).unwrap();
        let leads: Vec<Word> = rs.rules().into_iter().map(|r| r.lead).collect();
        assert_eq!(leads, vec![Word::from_indices(&[1, 0]), Word::from_indices(&[2, 0]), Word::from_indices(&[2, 1])]);
        let b3 = rs.graded_basis(3).unwrap();
        let expect: Vec<Word> = [[0, 0, 0], [0, 0, 1], [0, 0, 2], [0, 1, 1], [0, 1, 2], [0, 2, 2], [1, 1, 1], [1, 1, 2], [1, 2, 2], [2, 2, 2]]
            .iter()
            .map(|v| Word::from_indices(v))
            .collect();
        assert_eq!(b3, expect);
    }

    #[test]
    fn inhomogeneous_relations_rejected() {
        let r = w(&[0, 0]).sub(&w(&[1]));
        assert_eq!(complete(&[r], 2, 4, &MonomialOrder::natural(2)).unwrap_err(), RewriteError::NotHomogeneous);
        assert!(matches!(
            complete(&[w(&[0, 0, 0])], 1, 2, &MonomialOrder::natural(1)),
            Err(RewriteError::TruncationTooSmall(2, 3))
        ));
    }

    #[test]
    fn new_rules_appear_for_anticommuting_squares() {
        // k⟨x,y⟩/(x² − y²): needs the degree-3 rule from the xxx overlap
        let r = w(&[1, 1]).sub(&w(&[0, 0]));
        let rs = complete(&[r], 2, 5, &MonomialOrder::natural(2)).unwrap();
        let dims: Vec<usize> = rs.graded_bases(5).unwrap().iter().map(Vec::len).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5, 6]);
        let nf = rs.normal_form(&w(&[1, 1, 0]).sub(&w(&[0, 1, 1]))).unwrap();
        assert_eq!(nf, NcPoly::zero());
        assert!(rs.normal_form(&w(&[0; 6])).is_err());
        assert_eq!(rs.normal_form(&w(&[1, 1]).scale(&Scalar::int(2))).unwrap(), w(&[0, 0]).scale(&Scalar::int(2)));
    }
}
