//! Deterministic Schreier–Sims for permutation groups on `0..degree`.
//!
//! Permutations are image arrays: `p[x]` is the image of `x`. Products are
//! written left to right, `then(a, b)[x] = b[a[x]]`. Base points are chosen as
//! the smallest point moved by the generator that forces a new level. Coset
//! representatives live in Schreier vectors and are rebuilt on demand.

use std::collections::HashSet;

pub type Perm = Vec<u32>;

const NOT_IN_ORBIT: u32 = u32::MAX;
const AT_BASE: u32 = u32::MAX - 1;

pub fn identity_perm(degree: usize) -> Perm {
    (0..degree as u32).collect()
}

pub fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(x, &y)| x as u32 == y)
}

/// `a` first, then `b`.
pub fn then(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn invert(p: &[u32]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    inv
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Indices into the strong generating set.
    gens: Vec<usize>,
    /// Per point: generator index that reached it, `AT_BASE`, or `NOT_IN_ORBIT`.
    edge: Vec<u32>,
    orbit: Vec<u32>,
    checked: HashSet<(u32, usize)>,
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Perm>,
    strong_inv: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Perm]) -> Self {
        let mut chain = StabilizerChain { degree, strong: Vec::new(), strong_inv: Vec::new(), levels: Vec::new() };
        for g in generators {
            assert_eq!(g.len(), degree, "generator degree mismatch");
            let (residue, depth) = chain.sift(g.clone(), 0);
            if !is_identity(&residue) {
                chain.install(residue, depth, 0);
            }
        }
        chain.complete();
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        p.len() == self.degree && is_identity(&self.sift(p.to_vec(), 0).0)
    }

    // Strips `h` through levels `from..`; returns the residue and the level
    // where stripping stopped (`levels.len()` if it went all the way).
    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (depth, level) in self.levels.iter().enumerate().skip(from) {
            let mut p = h[level.base as usize];
            if level.edge[p as usize] == NOT_IN_ORBIT {
                return (h, depth);
            }
            while level.edge[p as usize] != AT_BASE {
                let gi = level.edge[p as usize] as usize;
                h = then(&h, &self.strong_inv[gi]);
                p = self.strong_inv[gi][p as usize];
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }

    fn representative(&self, depth: usize, point: u32) -> Perm {
        let level = &self.levels[depth];
        let mut path = Vec::new();
        let mut p = point;
        while level.edge[p as usize] != AT_BASE {
            let gi = level.edge[p as usize] as usize;
            path.push(gi);
            p = self.strong_inv[gi][p as usize];
        }
        let mut rep = identity_perm(self.degree);
        for &gi in path.iter().rev() {
            rep = then(&rep, &self.strong[gi]);
        }
        rep
    }

    // Adds `h` (fixing the base up to `depth`) to levels `from..=depth`.
    fn install(&mut self, h: Perm, depth: usize, from: usize) {
        if depth == self.levels.len() {
            let base = h.iter().enumerate().position(|(x, &y)| x as u32 != y).expect("non-identity") as u32;
            let mut edge = vec![NOT_IN_ORBIT; self.degree];
            edge[base as usize] = AT_BASE;
            self.levels.push(Level { base, gens: Vec::new(), edge, orbit: vec![base], checked: HashSet::new() });
        }
        let gi = self.strong.len();
        self.strong_inv.push(invert(&h));
        self.strong.push(h);
        for l in from..=depth {
            self.levels[l].gens.push(gi);
            self.extend_orbit(l);
        }
    }

    fn extend_orbit(&mut self, depth: usize) {
        let level = &mut self.levels[depth];
        let mut idx = 0;
        while idx < level.orbit.len() {
            let p = level.orbit[idx];
            for &gi in &level.gens {
                let q = self.strong[gi][p as usize];
                if level.edge[q as usize] == NOT_IN_ORBIT {
                    level.edge[q as usize] = gi as u32;
                    level.orbit.push(q);
                }
            }
            idx += 1;
        }
    }

    fn complete(&mut self) {
        let mut depth = self.levels.len();
        while depth > 0 {
            let i = depth - 1;
            match self.find_unsifted_schreier_generator(i) {
                Some((residue, stop)) => {
                    self.install(residue, stop, i + 1);
                    depth = stop + 1;
                }
                None => depth -= 1,
            }
        }
    }

    fn find_unsifted_schreier_generator(&mut self, i: usize) -> Option<(Perm, usize)> {
        let mut idx = 0;
        while idx < self.levels[i].orbit.len() {
            let p = self.levels[i].orbit[idx];
            let gens = self.levels[i].gens.clone();
            for gi in gens {
                if !self.levels[i].checked.insert((p, gi)) {
                    continue;
                }
                let q = self.strong[gi][p as usize];
                let up = self.representative(i, p);
                let uq_inv = invert(&self.representative(i, q));
                let schreier = then(&then(&up, &self.strong[gi]), &uq_inv);
                let (residue, stop) = self.sift(schreier, i + 1);
                if !is_identity(&residue) {
                    return Some((residue, stop));
                }
            }
            idx += 1;
        }
        None
    }
}
