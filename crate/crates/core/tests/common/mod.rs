//! Shared helpers and a naive permutation oracle that shares no code with the
//! library: permutations are bare image vectors, groups are ordered sets.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use fusionlab::harness::builtin_corpus;
use fusionlab::permcore::{group_closure, Limits, PermGroup, Permutation, Subgroup};

pub type Img = Vec<u32>;
pub type Set = BTreeSet<Img>;

pub fn lim() -> Limits {
    Limits::default()
}

pub fn perm(s: &str, n: usize) -> Permutation {
    Permutation::parse(s, n).unwrap()
}

pub fn grp(gens: &[&str], n: usize) -> Arc<PermGroup> {
    let gens: Vec<_> = gens.iter().map(|s| perm(s, n)).collect();
    Arc::new(group_closure(&gens, n, &lim()).unwrap())
}

pub fn builtin(name: &str) -> Arc<PermGroup> {
    let entry = builtin_corpus()
        .into_iter()
        .find(|e| e.name == name)
        .unwrap();
    entry.build(&lim()).unwrap()
}

/// Every `(name, group, p)` in the built-in corpus with `p` dividing the order.
pub fn builtin_pairs() -> Vec<(String, Arc<PermGroup>, u64)> {
    let mut out = Vec::new();
    for entry in builtin_corpus() {
        let g = entry.build(&lim()).unwrap();
        for p in primes_dividing(g.order() as u64) {
            out.push((entry.name.clone(), g.clone(), p));
        }
    }
    out
}

pub fn primes_dividing(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn img(p: &Permutation) -> Img {
    p.images().to_vec()
}

pub fn set_of_group(g: &PermGroup) -> Set {
    g.elements().iter().map(img).collect()
}

pub fn set_of_sub(h: &Subgroup) -> Set {
    h.elements().map(img).collect()
}

/// `a` then `b`.
pub fn compose(a: &Img, b: &Img) -> Img {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inverse(a: &Img) -> Img {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

pub fn identity(n: usize) -> Img {
    (0..n as u32).collect()
}

pub fn conj(x: &Img, g: &Img) -> Img {
    compose(&compose(&inverse(g), x), g)
}

pub fn order_of(x: &Img) -> usize {
    let id = identity(x.len());
    let mut y = x.clone();
    let mut k = 1;
    while y != id {
        y = compose(&y, x);
        k += 1;
    }
    k
}

/// Breadth-first closure of `gens` under right multiplication.
pub fn closure(gens: &[Img], n: usize) -> Set {
    let id = identity(n);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// All subgroups of `g`: closures of element pairs, then closed under joins.
pub fn subgroups(g: &Set) -> BTreeSet<Set> {
    let n = g.iter().next().map_or(0, |x| x.len());
    let elems: Vec<&Img> = g.iter().collect();
    let mut found = BTreeSet::new();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i..] {
            found.insert(closure(&[(*a).clone(), (*b).clone()], n));
        }
    }
    loop {
        let list: Vec<Set> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                let gens: Vec<Img> = a.iter().chain(b.iter()).cloned().collect();
                if found.insert(closure(&gens, n)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return found;
        }
    }
}

pub fn is_abelian(h: &Set) -> bool {
    h.iter()
        .all(|a| h.iter().all(|b| compose(a, b) == compose(b, a)))
}

pub fn center(g: &Set) -> Set {
    g.iter()
        .filter(|z| g.iter().all(|x| compose(z, x) == compose(x, z)))
        .cloned()
        .collect()
}

pub fn derived(g: &Set) -> Set {
    let n = g.iter().next().unwrap().len();
    let mut comms = Vec::new();
    for a in g {
        for b in g {
            comms.push(compose(&compose(&inverse(a), &inverse(b)), &compose(a, b)));
        }
    }
    closure(&comms, n)
}

/// Intersection of the maximal proper subgroups.
pub fn frattini(g: &Set) -> Set {
    let subs = subgroups(g);
    let proper: Vec<&Set> = subs.iter().filter(|h| h.len() < g.len()).collect();
    let maximal: Vec<&&Set> = proper
        .iter()
        .filter(|h| !proper.iter().any(|k| k.len() > h.len() && h.is_subset(k)))
        .collect();
    maximal
        .iter()
        .fold(g.clone(), |acc, m| acc.intersection(m).cloned().collect())
}

/// Join of the abelian subgroups of maximal order.
pub fn thompson(g: &Set) -> Set {
    let n = g.iter().next().unwrap().len();
    let abelian: Vec<Set> = subgroups(g).into_iter().filter(is_abelian).collect();
    let top = abelian.iter().map(|a| a.len()).max().unwrap();
    let gens: Vec<Img> = abelian
        .iter()
        .filter(|a| a.len() == top)
        .flat_map(|a| a.iter().cloned())
        .collect();
    closure(&gens, n)
}

/// `x ∈ q`, `x^g ∈ p` imply `x^g ∈ q`.
pub fn strongly_closed(g: &Set, p: &Set, q: &Set) -> bool {
    q.iter().all(|x| {
        g.iter().all(|h| {
            let y = conj(x, h);
            !p.contains(&y) || q.contains(&y)
        })
    })
}

/// Multiplication-preserving bijections of `h`, counted by brute force over
/// all bijections.
pub fn automorphism_count(h: &Set) -> usize {
    let elems: Vec<&Img> = h.iter().collect();
    let k = elems.len();
    let index = |x: &Img| elems.iter().position(|e| *e == x).unwrap();
    let table: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| index(&compose(elems[i], elems[j])))
                .collect()
        })
        .collect();
    let mut count = 0;
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        if (0..k).all(|i| (0..k).all(|j| perm[table[i][j]] == table[perm[i]][perm[j]])) {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            return count;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `G` has a normal `p`-complement iff its `p'`-elements are closed under
/// multiplication.
pub fn p_nilpotent(g: &Set, p: u64) -> bool {
    let coprime: Set = g
        .iter()
        .filter(|x| order_of(x) as u64 % p != 0)
        .cloned()
        .collect();
    coprime
        .iter()
        .all(|a| coprime.iter().all(|b| coprime.contains(&compose(a, b))))
}
