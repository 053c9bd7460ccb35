//! Monodromy of branched covers as tuples in S_d.
//!
//! Permutations act on `{0, .., d-1}` internally and are printed 1-based in
//! cycle notation. Products compose left to right: `a * b` applies `a` first.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Permutation { images })
    }

    /// From 1-based images, the one-line form.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("one-line images are 1-based".into()));
        }
        Self::from_images(images.iter().map(|x| x - 1).collect())
    }

    pub fn transposition(d: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(d);
        p.images.swap(i, j);
        p
    }

    /// Parses 1-based cycle notation such as `"(1 2)(3 4 5)"` or `"()"`.
    pub fn parse(d: usize, s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidPermutation(format!("{s:?}: {why}"));
        let mut images: Vec<usize> = (0..d).collect();
        let mut used = vec![false; d];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let end = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let cycle = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| match x.parse::<usize>() {
                    Ok(v) if (1..=d).contains(&v) => Ok(v - 1),
                    _ => Err(bad(&format!("{x} is not in 1..{d}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            for &x in &cycle {
                if std::mem::replace(&mut used[x], true) {
                    return Err(bad("repeated point"));
                }
            }
            for (k, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(k + 1) % cycle.len()];
            }
            rest = body[end + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// 1-based images.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `g^-1 * self * g`: relabels the points by `g`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.inverse().then(self).then(g)
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.then(b).then(&a.inverse()).then(&b.inverse())
    }

    /// Cycles including fixed points, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `d - #cycles`, the branching contributed at one point.
    pub fn branching(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// All of S_d in lexicographic order of images.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..d).collect();
        loop {
            out.push(Permutation { images: images.clone() });
            // next lexicographic permutation
            let Some(i) = (1..d).rev().find(|&i| images[i - 1] < images[i]) else {
                return out;
            };
            let j = (i..d).rev().find(|&j| images[j] > images[i - 1]).unwrap();
            images.swap(i - 1, j);
            images[i..].reverse();
        }
    }

    pub fn transpositions(d: usize) -> Vec<Permutation> {
        (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| Permutation::transposition(d, i, j)))
            .collect()
    }
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let items: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

/// The multiplicative order of `g`: the least orbinode index admitting a
/// representable extension of the local monodromy.
pub fn orbinode_index(g: &Permutation) -> u64 {
    g.order()
}

/// Monodromy of a degree-d cover of a genus-h curve branched over b points:
/// handle pairs `(α_i, β_i)` and local monodromies `σ_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchedMonodromy {
    degree: usize,
    handles: Vec<(Permutation, Permutation)>,
    branch: Vec<Permutation>,
}

impl BranchedMonodromy {
    /// All entries must lie in S_d; the surface relation is not enforced
    /// here (see [`BranchedMonodromy::validate`]).
    pub fn new(degree: usize, handles: Vec<(Permutation, Permutation)>, branch: Vec<Permutation>) -> Result<Self> {
        let entries = handles.iter().flat_map(|(a, b)| [a, b]).chain(&branch);
        for p in entries {
            if p.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "{p} has degree {} in a degree-{degree} tuple",
                    p.degree()
                )));
            }
        }
        Ok(BranchedMonodromy {
            degree,
            handles,
            branch,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_genus(&self) -> usize {
        self.handles.len()
    }

    pub fn handles(&self) -> &[(Permutation, Permutation)] {
        &self.handles
    }

    pub fn branch(&self) -> &[Permutation] {
        &self.branch
    }

    fn entries(&self) -> impl Iterator<Item = &Permutation> {
        self.handles.iter().flat_map(|(a, b)| [a, b]).chain(&self.branch)
    }

    /// `prod [α_i, β_i] * prod σ_j`.
    pub fn relation_product(&self) -> Permutation {
        let mut p = Permutation::identity(self.degree);
        for (a, b) in &self.handles {
            p = p.then(&Permutation::commutator(a, b));
        }
        for s in &self.branch {
            p = p.then(s);
        }
        p
    }

    /// Whether the surface-group relation holds.
    pub fn validate(&self) -> bool {
        self.relation_product().is_identity()
    }

    /// Whether the generated subgroup is transitive.
    pub fn is_connected(&self) -> bool {
        is_transitive(self.degree, self.entries())
    }

    /// Total branching `sum_j (d - #cycles(σ_j))`.
    pub fn total_branching(&self) -> usize {
        self.branch.iter().map(Permutation::branching).sum()
    }

    /// Genus of the cover from `2g - 2 = d(2h - 2) + sum_j (d - #cycles(σ_j))`.
    pub fn cover_genus(&self) -> Result<u64> {
        if !self.validate() {
            return Err(Error::InvalidPermutation(format!(
                "surface relation fails: product is {}",
                self.relation_product()
            )));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let d = self.degree as i64;
        let two_g = d * (2 * self.base_genus() as i64 - 2) + self.total_branching() as i64 + 2;
        assert!(two_g >= 0 && two_g % 2 == 0, "valid connected monodromy gave 2g = {two_g}");
        Ok((two_g / 2) as u64)
    }

    /// Simultaneous conjugation of every entry.
    pub fn conjugate_by(&self, g: &Permutation) -> Self {
        BranchedMonodromy {
            degree: self.degree,
            handles: self
                .handles
                .iter()
                .map(|(a, b)| (a.conjugate_by(g), b.conjugate_by(g)))
                .collect(),
            branch: self.branch.iter().map(|s| s.conjugate_by(g)).collect(),
        }
    }

    /// Orders of the local monodromies.
    pub fn local_orders(&self) -> Vec<u64> {
        self.branch.iter().map(Permutation::order).collect()
    }
}

fn is_transitive<'a>(d: usize, entries: impl Iterator<Item = &'a Permutation>) -> bool {
    if d <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..d).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for p in entries {
        for i in 0..d {
            let (a, b) = (root(&mut parent, i), root(&mut parent, p.image(i)));
            parent[a] = b;
        }
    }
    let r = root(&mut parent, 0);
    (0..d).all(|i| root(&mut parent, i) == r)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PermRepr {
    Cycles(String),
    OneLine(Vec<usize>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonodromyRepr {
    degree: usize,
    #[serde(default)]
    handles: Vec<[PermRepr; 2]>,
    #[serde(default)]
    branch: Vec<PermRepr>,
}

fn parse_repr(d: usize, r: &PermRepr) -> Result<Permutation> {
    let p = match r {
        PermRepr::Cycles(s) => Permutation::parse(d, s)?,
        PermRepr::OneLine(v) => Permutation::from_one_line(v)?,
    };
    if p.degree() != d {
        return Err(Error::InvalidPermutation(format!("{p} is not in S_{d}")));
    }
    Ok(p)
}

impl Serialize for BranchedMonodromy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonodromyRepr {
            degree: self.degree,
            handles: self
                .handles
                .iter()
                .map(|(a, b)| [PermRepr::Cycles(a.to_string()), PermRepr::Cycles(b.to_string())])
                .collect(),
            branch: self.branch.iter().map(|p| PermRepr::Cycles(p.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BranchedMonodromy {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MonodromyRepr::deserialize(de)?;
        let d = r.degree;
        let build = || -> Result<Self> {
            let handles = r
                .handles
                .iter()
                .map(|[a, b]| Ok((parse_repr(d, a)?, parse_repr(d, b)?)))
                .collect::<Result<Vec<_>>>()?;
            let branch = r.branch.iter().map(|p| parse_repr(d, p)).collect::<Result<Vec<_>>>()?;
            BranchedMonodromy::new(d, handles, branch)
        };
        build().map_err(D::Error::custom)
    }
}

fn factorial(d: usize) -> u128 {
    (1..=d as u128).product()
}

fn checked_budget(search_space: Option<u128>, d: usize, budget: u128) -> Result<u128> {
    let work = search_space.and_then(|s| s.checked_mul(factorial(d)));
    match (search_space, work) {
        (Some(s), Some(w)) if w <= budget => Ok(s),
        (s, _) => Err(Error::BudgetExceeded {
            search_space: s.unwrap_or(u128::MAX),
            budget,
        }),
    }
}

/// Counts of simply branched covers of a genus-h curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzCount {
    /// Transitive tuples satisfying the surface relation.
    pub raw: u64,
    /// `raw / d!`, each cover weighted by the inverse of its automorphisms.
    pub weighted: BigRational,
    /// Non-transitive tuples satisfying the surface relation.
    pub disconnected: u64,
    /// Tuples in the unpruned search space.
    pub search_space: u128,
}

impl HurwitzCount {
    /// Every tuple satisfying the relation, connected or not.
    pub fn total(&self) -> u64 {
        self.raw + self.disconnected
    }
}

/// Calls `visit` on every tuple of `h` handle pairs and `b` transpositions
/// whose relation product is the identity. Sharded by the first entry.
fn for_each_simple_tuple<T: Send>(
    d: usize,
    h: usize,
    b: usize,
    visit: impl Fn(&[(Permutation, Permutation)], &[Permutation]) -> Option<T> + Sync,
) -> Vec<T> {
    let group = Permutation::all(d);
    let transpositions = Permutation::transpositions(d);
    // first-entry shards: α_1 if there are handles, else σ_1
    let shards: Vec<Permutation> = if h > 0 { group.clone() } else { transpositions.clone() };
    if h == 0 && b == 0 {
        return visit(&[], &[]).into_iter().collect();
    }
    shards
        .par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut handles = Vec::with_capacity(h);
            let mut branch = Vec::with_capacity(b);
            let start = Permutation::identity(d);
            if h > 0 {
                walk_handles(
                    &group,
                    &transpositions,
                    h,
                    b,
                    Some(first),
                    &start,
                    &mut handles,
                    &mut branch,
                    &visit,
                    &mut out,
                );
            } else {
                branch.push(first.clone());
                walk_branch(&transpositions, b - 1, &start.then(first), &handles, &mut branch, &visit, &mut out);
            }
            out
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn walk_handles<T>(
    group: &[Permutation],
    transpositions: &[Permutation],
    h: usize,
    b: usize,
    fixed_alpha: Option<&Permutation>,
    product: &Permutation,
    handles: &mut Vec<(Permutation, Permutation)>,
    branch: &mut Vec<Permutation>,
    visit: &impl Fn(&[(Permutation, Permutation)], &[Permutation]) -> Option<T>,
    out: &mut Vec<T>,
) {
    if handles.len() == h {
        walk_branch(transpositions, b, product, handles, branch, visit, out);
        return;
    }
    let alphas: Vec<&Permutation> = match fixed_alpha {
        Some(a) => vec![a],
        None => group.iter().collect(),
    };
    for a in alphas {
        for beta in group {
            let next = product.then(&Permutation::commutator(a, beta));
            handles.push((a.clone(), beta.clone()));
            walk_handles(group, transpositions, h, b, None, &next, handles, branch, visit, out);
            handles.pop();
        }
    }
}

fn walk_branch<T>(
    transpositions: &[Permutation],
    remaining: usize,
    product: &Permutation,
    handles: &[(Permutation, Permutation)],
    branch: &mut Vec<Permutation>,
    visit: &impl Fn(&[(Permutation, Permutation)], &[Permutation]) -> Option<T>,
    out: &mut Vec<T>,
) {
    // each transposition moves the branching of the running product by one
    let n = product.branching();
    if n > remaining || (remaining - n) % 2 == 1 {
        return;
    }
    if remaining == 0 {
        if let Some(x) = visit(handles, branch) {
            out.push(x);
        }
        return;
    }
    for t in transpositions {
        branch.push(t.clone());
        walk_branch(transpositions, remaining - 1, &product.then(t), handles, branch, visit, out);
        branch.pop();
    }
}

fn simple_search_space(d: usize, h: usize, b: usize) -> Option<u128> {
    let t = (d * d.saturating_sub(1) / 2) as u128;
    let g = factorial(d);
    let handles = g.checked_pow(2 * h as u32)?;
    handles.checked_mul(t.checked_pow(b as u32)?)
}

/// Counts degree-d covers of a genus-h curve with b simple branch points.
pub fn hurwitz_count(d: usize, h: usize, b: usize, budget: u128) -> Result<HurwitzCount> {
    if d == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    let search_space = checked_budget(simple_search_space(d, h, b), d, budget)?;
    if d == 1 {
        // S_1 has no transpositions: only the unbranched trivial cover
        let raw = u64::from(b == 0);
        return Ok(HurwitzCount {
            raw,
            weighted: BigRational::from_integer(raw.into()),
            disconnected: 0,
            search_space,
        });
    }
    let flags = for_each_simple_tuple(d, h, b, |handles, branch| {
        let entries = handles.iter().flat_map(|(a, b)| [a, b]).chain(branch);
        Some(is_transitive(d, entries))
    });
    let raw = flags.iter().filter(|&&c| c).count() as u64;
    let disconnected = flags.len() as u64 - raw;
    Ok(HurwitzCount {
        raw,
        weighted: BigRational::new(raw.into(), factorial(d).into()),
        disconnected,
        search_space,
    })
}

/// Every tuple of `h` handle pairs and `b` transpositions satisfying the
/// surface relation, connected or not.
pub fn simple_branching_tuples(d: usize, h: usize, b: usize, budget: u128) -> Result<Vec<BranchedMonodromy>> {
    if d == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    checked_budget(simple_search_space(d, h, b), d, budget)?;
    if d == 1 {
        let id = Permutation::identity(1);
        return Ok(if b == 0 {
            vec![BranchedMonodromy::new(1, vec![(id.clone(), id); h], Vec::new())?]
        } else {
            Vec::new()
        });
    }
    let mut tuples = for_each_simple_tuple(d, h, b, |handles, branch| {
        Some(BranchedMonodromy {
            degree: d,
            handles: handles.to_vec(),
            branch: branch.to_vec(),
        })
    });
    tuples.sort();
    Ok(tuples)
}

/// One simultaneous-conjugacy class of étale covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleClass {
    /// Lexicographically least member of the class.
    pub monodromy: BranchedMonodromy,
    pub connected: bool,
    /// Size of the centralizer of the tuple, the automorphism group.
    pub automorphisms: u64,
    /// Orders of the local monodromies at the punctures.
    pub local_orders: Vec<u64>,
}

fn normalize_cycle_type(d: usize, t: &[usize]) -> Result<Vec<usize>> {
    if t.contains(&0) {
        return Err(Error::InvalidPermutation("cycle lengths must be positive".into()));
    }
    let total: usize = t.iter().sum();
    if total > d {
        return Err(Error::InvalidPermutation(format!("cycle type {t:?} exceeds degree {d}")));
    }
    let mut t = t.to_vec();
    t.extend(std::iter::repeat_n(1, d - total));
    t.sort_unstable_by(|a, b| b.cmp(a));
    Ok(t)
}

/// Étale covers of a genus-h curve with punctures of prescribed cycle types
/// (missing parts are padded with fixed points), one per conjugacy class.
pub fn enumerate_etale_covers(d: usize, h: usize, punctures: &[Vec<usize>], budget: u128) -> Result<Vec<EtaleClass>> {
    if d == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    let group = Permutation::all(d);
    let classes: Vec<Vec<Permutation>> = punctures
        .iter()
        .map(|t| {
            let t = normalize_cycle_type(d, t)?;
            Ok(group.iter().filter(|p| p.cycle_type() == t).cloned().collect())
        })
        .collect::<Result<_>>()?;
    let space = classes
        .iter()
        .fold(factorial(d).checked_pow(2 * h as u32), |acc, c| {
            acc.and_then(|a| a.checked_mul(c.len() as u128))
        });
    checked_budget(space, d, budget)?;

    // all tuples in lexicographic order, then canonical minima
    let mut tuples: Vec<Vec<Permutation>> = vec![Vec::new()];
    for _ in 0..2 * h {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                group.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    for class in &classes {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                class.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    let found: BTreeMap<BranchedMonodromy, EtaleClass> = tuples
        .into_par_iter()
        .filter_map(|entries| {
            let mut it = entries.into_iter();
            let handles = (0..h).map(|_| (it.next().unwrap(), it.next().unwrap())).collect();
            let m = BranchedMonodromy {
                degree: d,
                handles,
                branch: it.collect(),
            };
            if !m.validate() {
                return None;
            }
            let conjugates: Vec<BranchedMonodromy> = group.iter().map(|g| m.conjugate_by(g)).collect();
            let canonical = conjugates.iter().min().unwrap().clone();
            if canonical != m {
                return None;
            }
            let automorphisms = conjugates.iter().filter(|c| **c == m).count() as u64;
            Some((
                m.clone(),
                EtaleClass {
                    connected: m.is_connected(),
                    automorphisms,
                    local_orders: m.local_orders(),
                    monodromy: m,
                },
            ))
        })
        .collect();
    Ok(found.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: usize, s: &str) -> Permutation {
        Permutation::parse(d, s).unwrap()
    }

    fn m(d: usize, handles: &[(&str, &str)], branch: &[&str]) -> BranchedMonodromy {
        BranchedMonodromy::new(
            d,
            handles.iter().map(|(a, b)| (p(d, a), p(d, b))).collect(),
            branch.iter().map(|s| p(d, s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn cycle_notation() {
        let x = p(5, "(1 2)(3 4 5)");
        assert_eq!(x.to_string(), "(1 2)(3 4 5)");
        assert_eq!(x.one_line(), vec![2, 1, 4, 5, 3]);
        assert_eq!(p(3, "(2,3)").to_string(), "(2 3)");
        assert_eq!(p(3, "()").to_string(), "()");
        assert_eq!(p(3, "").to_string(), "()");
        assert_eq!(p(4, "(4 2)"), p(4, "(2 4)"));
        for bad in ["(1 4)", "(1 1)", "(1 2", "1 2", "(0 1)", "(1 2)(2 3)"] {
            assert!(Permutation::parse(3, bad).is_err(), "{bad}");
        }
        assert_eq!(Permutation::from_one_line(&[2, 3, 1]).unwrap(), p(3, "(1 2 3)"));
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
    }

    #[test]
    fn products_apply_left_first() {
        let a = p(3, "(1 2)");
        let b = p(3, "(2 3)");
        // 1 -> 2 -> 3
        assert_eq!((&a * &b).image(0), 2);
        assert_eq!(&a * &b, p(3, "(1 3 2)"));
        assert_eq!(p(4, "(1 2 3 4)").inverse(), p(4, "(1 4 3 2)"));
    }

    #[test]
    fn orders() {
        assert_eq!(orbinode_index(&p(3, "(1 2 3)")), 3);
        assert_eq!(orbinode_index(&Permutation::identity(4)), 1);
        assert_eq!(orbinode_index(&p(5, "(1 2)(3 4 5)")), 6);
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::transpositions(4).len(), 6);
    }

    #[test]
    fn validation_examples() {
        assert!(m(2, &[], &["(1 2)", "(1 2)"]).validate());
        assert!(!m(2, &[], &["(1 2)", "(1 2)", "(1 2)"]).validate());
        assert!(m(3, &[("(1 2 3)", "(1 2 3)")], &[]).validate());
        assert!(!m(3, &[("(1 2)", "(1 2 3)")], &[]).validate());
    }

    #[test]
    fn connectivity_examples() {
        assert!(m(3, &[], &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]).is_connected());
        assert!(!m(3, &[], &["(1 2)", "(1 2)"]).is_connected());
        assert!(m(1, &[], &["()"]).is_connected());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(m(2, &[], &["(1 2)"; 6]).cover_genus().unwrap(), 2);
        assert_eq!(m(3, &[], &["(1 2)", "(1 2)", "(2 3)", "(2 3)"]).cover_genus().unwrap(), 0);
        let two = m(3, &[], &["(1 2 3)", "(1 3 2)"]);
        assert_eq!(two.total_branching(), 4);
        assert_eq!(two.cover_genus().unwrap(), 0);
        assert!(matches!(m(3, &[], &["(1 2)", "(1 2)"]).cover_genus(), Err(Error::Disconnected)));
        assert!(m(2, &[], &["(1 2)"]).cover_genus().is_err());
    }

    #[test]
    fn hurwitz_examples() {
        let c = hurwitz_count(2, 0, 6, 10_000_000).unwrap();
        assert_eq!((c.raw, c.weighted.to_string()), (1, "1/2".into()));
        let c = hurwitz_count(3, 0, 4, 10_000_000).unwrap();
        assert_eq!((c.raw, c.weighted.to_string(), c.search_space), (24, "4".into(), 81));
        assert_eq!(c.disconnected, 3);
        assert_eq!(hurwitz_count(2, 0, 5, 10_000_000).unwrap().raw, 0);
        assert_eq!(hurwitz_count(1, 0, 0, 10).unwrap().raw, 1);
        assert!(matches!(
            hurwitz_count(4, 0, 6, 1000),
            Err(Error::BudgetExceeded { search_space: 46656, budget: 1000 })
        ));
    }

    #[test]
    fn tuples_match_counts_and_are_conjugation_invariant() {
        for (d, h, b) in [(3, 0, 4), (4, 0, 4), (2, 1, 2), (3, 1, 2)] {
            let tuples = simple_branching_tuples(d, h, b, 10_000_000).unwrap();
            let count = hurwitz_count(d, h, b, 10_000_000).unwrap();
            assert_eq!(tuples.len() as u64, count.total());
            assert_eq!(tuples.iter().filter(|t| t.is_connected()).count() as u64, count.raw);
            assert!(tuples.iter().all(BranchedMonodromy::validate));
            let g = Permutation::all(d).pop().unwrap();
            let mut conjugated: Vec<_> = tuples.iter().map(|t| t.conjugate_by(&g)).collect();
            conjugated.sort();
            assert_eq!(conjugated, tuples);
        }
    }

    #[test]
    fn etale_examples() {
        let covers = enumerate_etale_covers(2, 0, &[vec![2], vec![2]], 1000).unwrap();
        assert_eq!(covers.len(), 1);
        assert!(covers[0].connected);
        assert_eq!(covers[0].local_orders, vec![2, 2]);
        assert_eq!(covers[0].automorphisms, 2);

        let tori = enumerate_etale_covers(2, 1, &[], 1000).unwrap();
        assert_eq!(tori.len(), 4);
        assert_eq!(tori.iter().filter(|c| c.connected).count(), 3);
        assert_eq!(tori[0].monodromy, m(2, &[("()", "()")], &[]));

        let trivial = enumerate_etale_covers(1, 0, &[], 10).unwrap();
        assert_eq!(trivial.len(), 1);

        // three punctures of type (3) in S_3: only x, x, x, and (123) ~ (132)
        let threes = enumerate_etale_covers(3, 0, &vec![vec![3]; 3], 1000).unwrap();
        assert_eq!(threes.len(), 1);
        assert_eq!(threes[0].automorphisms, 3);
        assert!(enumerate_etale_covers(3, 0, &[vec![4]], 1000).is_err());
    }

    #[test]
    fn serde_forms() {
        let x = m(3, &[("(1 2 3)", "(1 2 3)")], &["(1 2)", "(1 2)"]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"degree":3,"handles":[["(1 2 3)","(1 2 3)"]],"branch":["(1 2)","(1 2)"]}"#);
        let back: BranchedMonodromy = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let one_line: BranchedMonodromy = serde_json::from_str(r#"{"degree":3,"branch":[[2,1,3],"(1 2)"]}"#).unwrap();
        assert_eq!(one_line, m(3, &[], &["(1 2)", "(1 2)"]));
        assert!(serde_json::from_str::<BranchedMonodromy>(r#"{"degree":2,"branch":["(1 3)"]}"#).is_err());
    }
}
