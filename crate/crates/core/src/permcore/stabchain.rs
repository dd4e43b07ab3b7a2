//! Deterministic Schreier–Sims, used only to cross-check group orders.

use std::collections::BTreeMap;

use super::perm::Permutation;

struct Level {
    point: u32,
    /// orbit point -> transversal element mapping `point` to it
    transversal: BTreeMap<u32, Permutation>,
}

/// Base and strong generating set of a permutation group.
pub struct StabilizerChain {
    degree: usize,
    base: Vec<u32>,
    strong_gens: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain {
            degree,
            base: Vec::new(),
            strong_gens: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators.iter().filter(|g| !g.is_identity()) {
            chain.strong_gens.push(g.clone());
            if chain.base.iter().all(|&b| g.apply(b) == b) {
                chain.base.push(g.first_moved_point().unwrap());
            }
        }
        chain.rebuild_levels();
        chain.complete();
        chain
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.transversal.len()).collect()
    }

    /// Product of basic orbit lengths.
    pub fn order(&self) -> u128 {
        self.orbit_lengths().iter().map(|&l| l as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (residue, _) = self.strip(g.clone(), 0);
        residue.is_identity()
    }

    fn level_gens(&self, level: usize) -> Vec<&Permutation> {
        let fixed = &self.base[..level];
        self.strong_gens
            .iter()
            .filter(|s| fixed.iter().all(|&b| s.apply(b) == b))
            .collect()
    }

    fn build_level(&self, level: usize) -> Level {
        let point = self.base[level];
        let gens = self.level_gens(level);
        let mut transversal = BTreeMap::new();
        transversal.insert(point, Permutation::identity(self.degree));
        let mut queue = vec![point];
        while let Some(b) = queue.pop() {
            let tb = transversal[&b].clone();
            for s in &gens {
                let c = s.apply(b);
                if let std::collections::btree_map::Entry::Vacant(e) = transversal.entry(c) {
                    e.insert(tb.compose(s));
                    queue.push(c);
                }
            }
        }
        Level { point, transversal }
    }

    fn rebuild_levels(&mut self) {
        self.levels = (0..self.base.len()).map(|i| self.build_level(i)).collect();
    }

    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (m, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.point);
            match level.transversal.get(&b) {
                Some(t) => g = g.compose(&t.inverse()),
                None => return (g, m),
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            let mut raised = None;
            'scan: for (b, tb) in self.levels[level].transversal.iter() {
                for s in self.level_gens(level) {
                    let tbs = &self.levels[level].transversal[&s.apply(*b)];
                    let schreier = tb.compose(s).compose(&tbs.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip(schreier, level + 1);
                    if !h.is_identity() {
                        raised = Some((h, j));
                        break 'scan;
                    }
                }
            }
            match raised {
                Some((h, j)) => {
                    if j == self.base.len() {
                        self.base.push(h.first_moved_point().unwrap());
                    }
                    self.strong_gens.push(h);
                    self.rebuild_levels();
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }
}
