//! Rewriting completion on path-algebra monomials.
//!
//! An instantiated presentation is expanded into flat relators (linear
//! combinations of parallel paths), each relator is oriented into a rule
//! `leading monomial -> smaller terms` under the length-lexicographic order,
//! and overlap and inclusion ambiguities are resolved in the style of the
//! diamond lemma until the system is confluent.  The irreducible monomials
//! then form a basis of `Λ = kQ/I`, and left multiplication by arrows gives
//! the structure constants everything downstream runs on.
//!
//! Words are stored in composition order: `word[0]` is the last arrow
//! applied, so the source of a path is the source of its final letter and a
//! product `u*v` concatenates as `u.word ++ v.word`.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::linalg::{Field, FieldElement};
use crate::presentations::{
    AlgebraPresentation, ArrowId, Coef, ElabError, ParamValue, PathExpr, Quiver, VertexId,
};

/// A path monomial: a composable word of arrows, or a vertex idempotent when
/// the word is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub source: VertexId,
    pub target: VertexId,
    /// Arrow indices in composition order (`word[0]` applied last).
    pub word: Vec<u8>,
}

impl Monomial {
    pub fn idempotent(v: VertexId) -> Monomial {
        Monomial { source: v, target: v, word: Vec::new() }
    }

    pub fn arrow(quiver: &Quiver, a: ArrowId) -> Monomial {
        let arrow = quiver.arrow(a);
        Monomial { source: arrow.source, target: arrow.target, word: vec![a.0 as u8] }
    }

    /// Builds a monomial from a word in composition order, checking
    /// composability.
    pub fn from_word(quiver: &Quiver, word: &[u8]) -> Option<Monomial> {
        if word.is_empty() {
            return None;
        }
        for w in word.windows(2) {
            let left = quiver.arrow(ArrowId(w[0] as usize));
            let right = quiver.arrow(ArrowId(w[1] as usize));
            if right.target != left.source {
                return None;
            }
        }
        let source = quiver.arrow(ArrowId(*word.last().unwrap() as usize)).source;
        let target = quiver.arrow(ArrowId(word[0] as usize)).target;
        Some(Monomial { source, target, word: word.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `self * other`: apply `other` first.  `None` if not composable.
    pub fn compose(&self, other: &Monomial) -> Option<Monomial> {
        if other.target != self.source {
            return None;
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Some(Monomial { source: other.source, target: self.target, word })
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.word.is_empty() {
            format!("e({})", quiver.vertex_label(self.source))
        } else {
            let names: Vec<&str> = self
                .word
                .iter()
                .map(|&a| quiver.arrow(ArrowId(a as usize)).name.as_str())
                .collect();
            names.join("*")
        }
    }
}

/// Length-lexicographic order in declaration order of the arrows
/// (ties between idempotents broken by vertex).
pub fn cmp_mono(a: &Monomial, b: &Monomial) -> Ordering {
    a.word
        .len()
        .cmp(&b.word.len())
        .then_with(|| a.word.cmp(&b.word))
        .then_with(|| a.source.cmp(&b.source))
}

/// A linear combination of monomials, kept sorted in descending monomial
/// order with no zero coefficients, so the leading term is `terms[0]`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LinComb {
    pub terms: Vec<(FieldElement, Monomial)>,
}

impl LinComb {
    pub fn zero() -> LinComb {
        LinComb { terms: Vec::new() }
    }

    pub fn from_terms(field: Field, terms: Vec<(FieldElement, Monomial)>) -> LinComb {
        let mut sorted = terms;
        sorted.sort_by(|x, y| cmp_mono(&y.1, &x.1));
        let mut out: Vec<(FieldElement, Monomial)> = Vec::with_capacity(sorted.len());
        for (c, m) in sorted {
            match out.last_mut() {
                Some((acc, last)) if *last == m => {
                    *acc = field.add(*acc, c);
                    if acc.0 == 0 {
                        out.pop();
                    }
                }
                _ => {
                    if c.0 != 0 {
                        out.push((c, m));
                    }
                }
            }
        }
        LinComb { terms: out }
    }

    pub fn single(c: FieldElement, m: Monomial) -> LinComb {
        if c.0 == 0 {
            LinComb::zero()
        } else {
            LinComb { terms: vec![(c, m)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, field: Field, other: &LinComb) -> LinComb {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LinComb::from_terms(field, terms)
    }

    pub fn sub(&self, field: Field, other: &LinComb) -> LinComb {
        let negated: Vec<_> =
            other.terms.iter().map(|(c, m)| (field.neg(*c), m.clone())).collect();
        let mut terms = self.terms.clone();
        terms.extend(negated);
        LinComb::from_terms(field, terms)
    }

    pub fn scale(&self, field: Field, c: FieldElement) -> LinComb {
        if c.0 == 0 {
            return LinComb::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(d, m)| (field.mul(*d, c), m.clone())).collect(),
        }
    }

    /// `self * other` in the path algebra (all pairwise compositions;
    /// non-composable pairs vanish).
    pub fn compose(&self, field: Field, other: &LinComb) -> LinComb {
        let mut terms = Vec::new();
        for (c1, m1) in &self.terms {
            for (c2, m2) in &other.terms {
                if let Some(m) = m1.compose(m2) {
                    terms.push((field.mul(*c1, *c2), m));
                }
            }
        }
        LinComb::from_terms(field, terms)
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, m)| {
                if c.0 == 1 {
                    m.display(quiver)
                } else {
                    format!("{}*{}", c.0, m.display(quiver))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RewriteError {
    /// The presentation still has unbound parameters.
    NotInstantiated,
    /// The degree cap is below the longest relator monomial.
    CapTooSmall { cap: usize, relator_len: usize },
    /// New rules (or irreducible monomials) still arise at the cap: either
    /// the cap is too small or the quotient is infinite-dimensional.
    CapExceeded { degree: usize },
    /// A relation forces a vertex idempotent into the ideal.
    IdempotentCollapse,
    Elab(ElabError),
}

impl fmt::Display for RewriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteError::NotInstantiated => {
                write!(f, "presentation has unbound parameters; instantiate it first")
            }
            RewriteError::CapTooSmall { cap, relator_len } => {
                write!(f, "degree cap {cap} is smaller than a relator of length {relator_len}")
            }
            RewriteError::CapExceeded { degree } => {
                write!(
                    f,
                    "completion still produces monomials at degree {degree}: raise the cap or check that the quotient is finite-dimensional"
                )
            }
            RewriteError::IdempotentCollapse => {
                write!(f, "a relation collapses a vertex idempotent; that quotient is not supported")
            }
            RewriteError::Elab(e) => write!(f, "{e}"),
        }
    }
}

impl From<ElabError> for RewriteError {
    fn from(e: ElabError) -> Self {
        RewriteError::Elab(e)
    }
}

/// One rewrite rule: `lhs -> rhs` with every `rhs` monomial strictly smaller.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Monomial,
    pub rhs: LinComb,
}

/// A confluent rewriting system for an instantiated presentation.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub field: Field,
    pub quiver: Quiver,
    pub rules: Vec<Rule>,
    pub degree_cap: usize,
}

// ---------------------------------------------------------------------------
// relator expansion
// ---------------------------------------------------------------------------

fn resolve_coef(
    p: &AlgebraPresentation,
    c: &Coef,
) -> Result<FieldElement, ElabError> {
    match c {
        Coef::Int(n) => Ok(p.field.from_int(*n)),
        Coef::Param(name) => match p.bindings.get(name) {
            Some(ParamValue::Scalar(s)) => Ok(*s),
            Some(ParamValue::Int(_)) => Err(ElabError::WrongParamKind(name.clone())),
            None => Err(ElabError::UnboundParam(name.clone())),
        },
    }
}

fn expand_expr(p: &AlgebraPresentation, e: &PathExpr) -> Result<LinComb, ElabError> {
    let field = p.field;
    match e {
        PathExpr::Vertex(label) => {
            let v = p
                .quiver
                .vertex_id(label)
                .ok_or_else(|| ElabError::UnknownVertex(format!("e({label})")))?;
            Ok(LinComb::single(field.one(), Monomial::idempotent(v)))
        }
        PathExpr::Arrow(name) => {
            let a = p.quiver.arrow_id(name).ok_or_else(|| ElabError::UnknownSymbol(name.clone()))?;
            Ok(LinComb::single(field.one(), Monomial::arrow(&p.quiver, a)))
        }
        PathExpr::Mul(l, r) => {
            let lc = expand_expr(p, l)?;
            let rc = expand_expr(p, r)?;
            Ok(lc.compose(field, &rc))
        }
        PathExpr::Pow(base, exp) => {
            let n = exp.eval(&p.bindings)?;
            if n < 0 {
                return Err(ElabError::BadExponent(n));
            }
            let (s, _) = p.signature(base)?;
            let mut acc = LinComb::single(field.one(), Monomial::idempotent(s));
            let b = expand_expr(p, base)?;
            for _ in 0..n {
                acc = acc.compose(field, &b);
            }
            Ok(acc)
        }
        PathExpr::Scalar(c, body) => {
            let s = resolve_coef(p, c)?;
            Ok(expand_expr(p, body)?.scale(field, s))
        }
        PathExpr::Add(a, b) => Ok(expand_expr(p, a)?.add(field, &expand_expr(p, b)?)),
        PathExpr::Sub(a, b) => Ok(expand_expr(p, a)?.sub(field, &expand_expr(p, b)?)),
    }
}

/// Expands every relation of an instantiated presentation into a flat linear
/// combination of paths; zero relators (e.g. a term with scalar zero) are
/// dropped.
pub fn expand_relators(p: &AlgebraPresentation) -> Result<Vec<LinComb>, RewriteError> {
    if !p.is_instantiated() {
        return Err(RewriteError::NotInstantiated);
    }
    let mut out = Vec::new();
    for rel in &p.relations {
        let lc = expand_expr(p, rel)?;
        if !lc.is_zero() {
            out.push(lc);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// reduction
// ---------------------------------------------------------------------------

/// Leftmost occurrence of any rule's lhs inside `word`; lowest rule index
/// wins at equal positions.  Returns (position, rule index).
fn find_redex(rules: &[Rule], word: &[u8]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (ri, rule) in rules.iter().enumerate() {
        let l = rule.lhs.word.len();
        if l == 0 || l > word.len() {
            continue;
        }
        for pos in 0..=(word.len() - l) {
            if &word[pos..pos + l] == rule.lhs.word.as_slice() {
                if best.is_none_or(|(bp, bi)| pos < bp || (pos == bp && ri < bi)) {
                    best = Some((pos, ri));
                }
                break;
            }
        }
    }
    best
}

struct Reducer<'a> {
    field: Field,
    quiver: &'a Quiver,
    rules: &'a [Rule],
    cache: BTreeMap<Vec<u8>, LinComb>,
}

impl<'a> Reducer<'a> {
    fn new(field: Field, quiver: &'a Quiver, rules: &'a [Rule]) -> Self {
        Reducer { field, quiver, rules, cache: BTreeMap::new() }
    }

    fn nf_monomial(&mut self, m: &Monomial) -> LinComb {
        if m.word.is_empty() {
            return LinComb::single(self.field.one(), m.clone());
        }
        if let Some(hit) = self.cache.get(&m.word) {
            return hit.clone();
        }
        let result = match find_redex(self.rules, &m.word) {
            None => LinComb::single(self.field.one(), m.clone()),
            Some((pos, ri)) => {
                let rule = &self.rules[ri];
                let l = rule.lhs.word.len();
                let mut acc = LinComb::zero();
                let rhs = rule.rhs.clone();
                for (c, t) in &rhs.terms {
                    let mut word = Vec::with_capacity(m.word.len() - l + t.word.len());
                    word.extend_from_slice(&m.word[..pos]);
                    word.extend_from_slice(&t.word);
                    word.extend_from_slice(&m.word[pos + l..]);
                    let piece = if word.is_empty() {
                        Monomial::idempotent(t.source)
                    } else {
                        Monomial::from_word(self.quiver, &word)
                            .expect("rule substitution preserves composability")
                    };
                    let reduced = self.nf_monomial(&piece);
                    acc = acc.add(self.field, &reduced.scale(self.field, *c));
                }
                acc
            }
        };
        self.cache.insert(m.word.clone(), result.clone());
        result
    }

    fn nf(&mut self, lc: &LinComb) -> LinComb {
        let mut acc = LinComb::zero();
        for (c, m) in &lc.terms {
            let r = self.nf_monomial(m);
            acc = acc.add(self.field, &r.scale(self.field, *c));
        }
        acc
    }
}

/// Fully reduces a linear combination; the result is irreducible, equal to
/// the input modulo the ideal, and `normal_form` is idempotent.
pub fn normal_form(rs: &RewriteSystem, elem: &LinComb) -> LinComb {
    Reducer::new(rs.field, &rs.quiver, &rs.rules).nf(elem)
}

// ---------------------------------------------------------------------------
// completion
// ---------------------------------------------------------------------------

/// Runs completion on the expanded relators.
///
/// Fails with `CapExceeded` if a derived rule's leading monomial would exceed
/// `degree_cap`, which signals either a too-small cap or an
/// infinite-dimensional quotient; the same check is applied to the
/// irreducible monomials, so a successful completion always has a finite
/// basis reachable below the cap.
pub fn complete(
    p: &AlgebraPresentation,
    degree_cap: usize,
) -> Result<RewriteSystem, RewriteError> {
    let relators = expand_relators(p)?;
    let field = p.field;
    let max_len = relators
        .iter()
        .flat_map(|r| r.terms.iter().map(|(_, m)| m.len()))
        .max()
        .unwrap_or(0);
    if degree_cap < max_len {
        return Err(RewriteError::CapTooSmall { cap: degree_cap, relator_len: max_len });
    }

    let mut rules: Vec<Rule> = Vec::new();
    let mut queue: VecDeque<LinComb> = relators.iter().cloned().collect();

    while let Some(item) = queue.pop_front() {
        let reduced = Reducer::new(field, &p.quiver, &rules).nf(&item);
        if reduced.is_zero() {
            continue;
        }
        let (lead_c, lead_m) = reduced.terms[0].clone();
        if lead_m.is_empty() {
            return Err(RewriteError::IdempotentCollapse);
        }
        if lead_m.len() > degree_cap {
            return Err(RewriteError::CapExceeded { degree: lead_m.len() });
        }
        let inv = field.inv(lead_c);
        let rest = LinComb { terms: reduced.terms[1..].to_vec() };
        let rhs = rest.scale(field, field.neg(inv));
        let new_rule = Rule { lhs: lead_m, rhs };

        // queue every overlap and inclusion ambiguity against existing rules
        // (and the new rule against itself)
        let new_idx = rules.len();
        rules.push(new_rule);
        for i in 0..rules.len() {
            for (a, b) in [(i, new_idx), (new_idx, i)] {
                if a == b && a != new_idx {
                    continue;
                }
                enqueue_ambiguities(field, &p.quiver, &rules, a, b, &mut queue);
            }
        }
    }

    // cleanup: re-reduce right-hand sides against the finished system and
    // drop rules that are consequences of the others
    let final_rules = interreduce(field, &p.quiver, rules);

    Ok(RewriteSystem { field, quiver: p.quiver.clone(), rules: final_rules, degree_cap })
}

/// Critical pairs of rules `a` and `b`: proper overlaps (a suffix of
/// `lhs(a)` equals a prefix of `lhs(b)`) and inclusions (`lhs(b)` a factor
/// of `lhs(a)`).  The difference of the two one-step reductions of each
/// ambiguity word is queued.
fn enqueue_ambiguities(
    field: Field,
    quiver: &Quiver,
    rules: &[Rule],
    a: usize,
    b: usize,
    queue: &mut VecDeque<LinComb>,
) {
    let la = &rules[a].lhs.word;
    let lb = &rules[b].lhs.word;

    // overlaps: la = x s, lb = s y with s nonempty and both parts proper
    let max_s = la.len().min(lb.len()).saturating_sub(if a == b { 1 } else { 0 });
    for s in 1..=max_s {
        if s == la.len() && s == lb.len() {
            // identical words: same rule applied two ways, nothing to do
            continue;
        }
        if la[la.len() - s..] == lb[..s] {
            let mut word = la.clone();
            word.extend_from_slice(&lb[s..]);
            if let Some(amb) = Monomial::from_word(quiver, &word) {
                // reduce via rule a at position 0 and via rule b at la.len()-s
                let left = one_step(field, quiver, rules, &amb, 0, a);
                let right = one_step(field, quiver, rules, &amb, la.len() - s, b);
                queue.push_back(left.sub(field, &right));
            }
        }
    }

    // inclusions: lb a proper factor of la
    if a != b && lb.len() < la.len() {
        for pos in 0..=(la.len() - lb.len()) {
            if &la[pos..pos + lb.len()] == lb.as_slice() {
                let amb = rules[a].lhs.clone();
                let left = one_step(field, quiver, rules, &amb, 0, a);
                let right = one_step(field, quiver, rules, &amb, pos, b);
                queue.push_back(left.sub(field, &right));
            }
        }
    }
}

/// Applies rule `ri` to `m` at `pos` (one step, no further reduction).
fn one_step(
    field: Field,
    quiver: &Quiver,
    rules: &[Rule],
    m: &Monomial,
    pos: usize,
    ri: usize,
) -> LinComb {
    let rule = &rules[ri];
    let l = rule.lhs.word.len();
    debug_assert_eq!(&m.word[pos..pos + l], rule.lhs.word.as_slice());
    let mut terms = Vec::new();
    for (c, t) in &rule.rhs.terms {
        let mut word = Vec::with_capacity(m.word.len() - l + t.word.len());
        word.extend_from_slice(&m.word[..pos]);
        word.extend_from_slice(&t.word);
        word.extend_from_slice(&m.word[pos + l..]);
        let mono = if word.is_empty() {
            Monomial::idempotent(t.source)
        } else {
            Monomial::from_word(quiver, &word).expect("substitution stays composable")
        };
        terms.push((*c, mono));
    }
    LinComb::from_terms(field, terms)
}

fn interreduce(field: Field, quiver: &Quiver, rules: Vec<Rule>) -> Vec<Rule> {
    // drop rules derivable from the others, then normalize right-hand sides
    let mut keep: Vec<bool> = vec![true; rules.len()];
    for i in 0..rules.len() {
        let others: Vec<Rule> = rules
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, r)| r.clone())
            .collect();
        let full = LinComb::single(field.one(), rules[i].lhs.clone()).sub(field, &rules[i].rhs);
        if Reducer::new(field, quiver, &others).nf(&full).is_zero() {
            keep[i] = false;
        }
    }
    let kept: Vec<Rule> = rules
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(r, _)| r)
        .collect();
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let rhs = Reducer::new(field, quiver, &kept).nf(&kept[i].rhs);
        out.push(Rule { lhs: kept[i].lhs.clone(), rhs });
    }
    out.sort_by(|a, b| cmp_mono(&a.lhs, &b.lhs));
    out
}

// ---------------------------------------------------------------------------
// the monomial basis
// ---------------------------------------------------------------------------

/// The finite basis of irreducible monomials of `Λ`, with left-multiplication
/// structure constants.
#[derive(Clone, Debug)]
pub struct NormalBasis {
    pub field: Field,
    pub quiver: Quiver,
    monomials: Vec<Monomial>,
    index: BTreeMap<(usize, Vec<u8>), usize>,
    by_source: Vec<Vec<usize>>,
    idempotents: Vec<usize>,
    /// `arrow_action[a][i]` is the basis expansion of `a * monomial[i]`
    /// (empty when not composable, which is the zero product).
    arrow_action: Vec<Vec<Vec<(FieldElement, usize)>>>,
}

impl NormalBasis {
    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(&(m.source.0, m.word.clone())).copied()
    }

    pub fn idempotent_index(&self, v: VertexId) -> usize {
        self.idempotents[v.0]
    }

    /// Indices of basis monomials with the given source, in basis order.
    pub fn with_source(&self, v: VertexId) -> &[usize] {
        &self.by_source[v.0]
    }

    /// Per (source, target) pair counts of basis monomials.
    pub fn pair_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for m in &self.monomials {
            *out.entry((m.source.0, m.target.0)).or_insert(0) += 1;
        }
        out
    }

    pub fn arrow_action(&self, a: ArrowId, i: usize) -> &[(FieldElement, usize)] {
        &self.arrow_action[a.0][i]
    }

    /// Structure constants: the basis expansion of `monomial[i] * monomial[j]`.
    pub fn product(&self, i: usize, j: usize) -> Vec<(FieldElement, usize)> {
        let mi = &self.monomials[i];
        let mj = &self.monomials[j];
        if mj.target != mi.source {
            return Vec::new();
        }
        // apply the letters of m_i right to left on top of m_j
        let mut acc: Vec<(FieldElement, usize)> = vec![(self.field.one(), j)];
        for &letter in mi.word.iter().rev() {
            let mut next: BTreeMap<usize, FieldElement> = BTreeMap::new();
            for (c, idx) in &acc {
                for (d, t) in &self.arrow_action[letter as usize][*idx] {
                    let e = self.field.mul(*c, *d);
                    let entry = next.entry(*t).or_insert(self.field.zero());
                    *entry = self.field.add(*entry, e);
                }
            }
            acc = next
                .into_iter()
                .filter(|(_, c)| c.0 != 0)
                .map(|(t, c)| (c, t))
                .collect();
            if acc.is_empty() {
                break;
            }
        }
        acc
    }
}

/// Enumerates the irreducible monomials breadth-first by length (then
/// lexicographic arrow order) and materializes the arrow action.
pub fn basis(rs: &RewriteSystem) -> Result<NormalBasis, RewriteError> {
    let quiver = &rs.quiver;
    let mut monomials: Vec<Monomial> = Vec::new();
    let mut frontier: Vec<Monomial> = Vec::new();
    for v in quiver.vertex_ids() {
        frontier.push(Monomial::idempotent(v));
    }
    let reducible_prefix = |word: &[u8]| -> bool {
        rs.rules.iter().any(|r| {
            let l = r.lhs.word.len();
            l > 0 && l <= word.len() && word[..l] == r.lhs.word[..]
        })
    };
    while !frontier.is_empty() {
        monomials.extend(frontier.iter().cloned());
        let mut next: Vec<Monomial> = Vec::new();
        for m in &frontier {
            for a in quiver.arrow_ids() {
                let arrow = quiver.arrow(a);
                if arrow.source != m.target {
                    continue;
                }
                let mut word = vec![a.0 as u8];
                word.extend_from_slice(&m.word);
                // m is irreducible, so only prefixes can match a rule
                if !reducible_prefix(&word) {
                    next.push(Monomial {
                        source: m.source,
                        target: arrow.target,
                        word,
                    });
                }
            }
        }
        if let Some(m) = next.first() {
            if m.len() > rs.degree_cap {
                return Err(RewriteError::CapExceeded { degree: m.len() });
            }
        }
        frontier = next;
    }
    monomials.sort_by(cmp_mono);

    let mut index = BTreeMap::new();
    let mut by_source = vec![Vec::new(); quiver.vertex_count()];
    let mut idempotents = vec![usize::MAX; quiver.vertex_count()];
    for (i, m) in monomials.iter().enumerate() {
        index.insert((m.source.0, m.word.clone()), i);
        by_source[m.source.0].push(i);
        if m.is_empty() {
            idempotents[m.source.0] = i;
        }
    }

    let mut reducer = Reducer::new(rs.field, quiver, &rs.rules);
    let mut arrow_action = Vec::with_capacity(quiver.arrow_count());
    for a in quiver.arrow_ids() {
        let am = Monomial::arrow(quiver, a);
        let mut per_basis = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let action = match am.compose(m) {
                None => Vec::new(),
                Some(prod) => {
                    let nf = reducer.nf_monomial(&prod);
                    nf.terms
                        .iter()
                        .map(|(c, t)| {
                            let idx = index
                                .get(&(t.source.0, t.word.clone()))
                                .copied()
                                .expect("normal form lies in the basis");
                            (*c, idx)
                        })
                        .collect()
                }
            };
            per_basis.push(action);
        }
        arrow_action.push(per_basis);
    }

    Ok(NormalBasis {
        field: rs.field,
        quiver: quiver.clone(),
        monomials,
        index,
        by_source,
        idempotents,
        arrow_action,
    })
}

/// Smallest `m` with `(arrow span)^m = 0` in `Λ`: the nilpotency index of the
/// Jacobson radical, an upper bound for every Loewy series in sight.
pub fn radical_nilpotency(nb: &NormalBasis) -> usize {
    let dim = nb.dimension();
    let field = nb.field;
    // J^1 spanned by the normal forms of the arrows
    let mut span: Vec<Vec<FieldElement>> = Vec::new();
    for a in nb.quiver.arrow_ids() {
        let am = Monomial::arrow(&nb.quiver, a);
        let mut v = vec![field.zero(); dim];
        match nb.index_of(&am) {
            Some(i) => v[i] = field.one(),
            None => {
                // the arrow itself reduces; expand via the action on its
                // source idempotent
                let e = nb.idempotent_index(am.source);
                for (c, t) in nb.arrow_action(a, e) {
                    v[*t] = field.add(v[*t], *c);
                }
            }
        }
        span.push(v);
    }
    let mut power = 1usize;
    let mut current = row_space(field, span, dim);
    loop {
        if current.is_empty() {
            return power;
        }
        if power > dim + 1 {
            // cannot happen for a nilpotent ideal of a finite-dim algebra
            unreachable!("radical fails to be nilpotent");
        }
        // J^{m+1} = sum over arrows of a * J^m
        let mut next: Vec<Vec<FieldElement>> = Vec::new();
        for a in nb.quiver.arrow_ids() {
            for row in &current {
                let mut img = vec![field.zero(); dim];
                let mut nonzero = false;
                for (i, c) in row.iter().enumerate() {
                    if c.0 == 0 {
                        continue;
                    }
                    for (d, t) in nb.arrow_action(a, i) {
                        img[*t] = field.add(img[*t], field.mul(*c, *d));
                    }
                }
                for c in &img {
                    if c.0 != 0 {
                        nonzero = true;
                        break;
                    }
                }
                if nonzero {
                    next.push(img);
                }
            }
        }
        current = row_space(field, next, dim);
        power += 1;
    }
}

/// Canonical row-space basis (RREF rows, zero rows dropped).
fn row_space(field: Field, rows: Vec<Vec<FieldElement>>, dim: usize) -> Vec<Vec<FieldElement>> {
    use crate::linalg::{rref, FieldMatrix};
    if rows.is_empty() {
        return Vec::new();
    }
    let m = FieldMatrix::from_rows(field, &rows);
    let r = rref(&m);
    (0..r.rank).map(|i| (0..dim).map(|j| r.matrix.get(i, j)).collect()).collect()
}
