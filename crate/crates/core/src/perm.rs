//! Small permutation groups on at most eight points.

use std::collections::{BTreeSet, HashMap, VecDeque};

/// Maximum number of points.
pub const MAX_POINTS: usize = 8;

/// A permutation of `{0, .., n-1}`, stored as its image list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    n: u8,
    img: [u8; MAX_POINTS],
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_POINTS, "at most {MAX_POINTS} points");
        let mut img = [0u8; MAX_POINTS];
        for (i, v) in img.iter_mut().enumerate() {
            *v = i as u8;
        }
        Perm { n: n as u8, img }
    }

    /// From an image list; `None` unless it is a bijection.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n > MAX_POINTS {
            return None;
        }
        let mut seen = [false; MAX_POINTS];
        let mut p = Perm::identity(n);
        for (i, &v) in images.iter().enumerate() {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
            p.img[i] = v as u8;
        }
        Some(p)
    }

    /// From disjoint cycles written with 1-based points, e.g. `&[&[1, 2, 3]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = BTreeSet::new();
        for c in cycles {
            for (i, &a) in c.iter().enumerate() {
                if a == 0 || a > n || !used.insert(a) {
                    return None;
                }
                images[a - 1] = c[(i + 1) % c.len()] - 1;
            }
        }
        Perm::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[i] = self.img[other.img[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.img[i] as usize == i)
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = [false; MAX_POINTS];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// A subgroup of `S_n`, kept as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Closure of the generators under composition.
    pub fn generate(n: usize, gens: &[Perm]) -> Self {
        let id = Perm::identity(n);
        let mut seen: BTreeSet<Perm> = BTreeSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let h = g.compose(s);
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        PermGroup { n, elements: seen.into_iter().collect() }
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup::generate(n, &[])
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[1, 2]]).unwrap());
            let long: Vec<usize> = (1..=n).collect();
            gens.push(Perm::from_cycles(n, &[&long]).unwrap());
        }
        PermGroup::generate(n, &gens)
    }

    /// Permutations of `{0..n-1}` fixing every point of `fixed` (0-based).
    pub fn pointwise_stabilizer(n: usize, fixed: &[usize]) -> Self {
        let moved: Vec<usize> = (0..n).filter(|i| !fixed.contains(i)).collect();
        let mut gens = Vec::new();
        for w in moved.windows(2) {
            gens.push(Perm::from_cycles(n, &[&[w[0] + 1, w[1] + 1]]).unwrap());
        }
        PermGroup::generate(n, &gens)
    }

    /// Young subgroup `S_{b_1} x S_{b_2} x ...` on consecutive blocks.
    pub fn young(n: usize, blocks: &[usize]) -> Self {
        assert_eq!(blocks.iter().sum::<usize>(), n, "blocks must partition n");
        let mut gens = Vec::new();
        let mut start = 1;
        for &b in blocks {
            for i in start..start + b.saturating_sub(1) {
                gens.push(Perm::from_cycles(n, &[&[i, i + 1]]).unwrap());
            }
            start += b;
        }
        PermGroup::generate(n, &gens)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn intersect(&self, other: &PermGroup) -> PermGroup {
        let elements = self.elements.iter().filter(|g| other.contains(g)).copied().collect();
        PermGroup { n: self.n, elements }
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// Smallest element of the left coset `g H`.
    pub fn coset_key(&self, g: &Perm) -> Perm {
        self.elements.iter().map(|h| g.compose(h)).min().expect("groups are nonempty")
    }

    /// Conjugacy classes of the group, keyed by cycle type. Valid for the
    /// full symmetric group, where cycle type determines the class.
    pub fn classes_by_cycle_type(&self) -> HashMap<Vec<usize>, Vec<Perm>> {
        let mut out: HashMap<Vec<usize>, Vec<Perm>> = HashMap::new();
        for g in &self.elements {
            out.entry(g.cycle_type()).or_default().push(*g);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(PermGroup::symmetric(5).order(), 120);
        assert_eq!(PermGroup::pointwise_stabilizer(5, &[4]).order(), 24);
        assert_eq!(PermGroup::young(6, &[2, 2, 2]).order(), 8);
        assert_eq!(PermGroup::trivial(4).order(), 1);
    }

    #[test]
    fn composition_and_cycles() {
        let a = Perm::from_cycles(4, &[&[1, 2]]).unwrap();
        let b = Perm::from_cycles(4, &[&[2, 3]]).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.cycle_type(), vec![3, 1]);
        assert!(ab.compose(&ab.inverse()).is_identity());
        assert!(Perm::from_cycles(3, &[&[1, 1]]).is_none());
    }

    #[test]
    fn stabilizer_intersection() {
        let k = PermGroup::pointwise_stabilizer(5, &[4]);
        let kp = PermGroup::pointwise_stabilizer(5, &[3]);
        let j = k.intersect(&kp);
        assert_eq!(j.order(), 6);
        assert!(j.is_subgroup_of(&k));
    }
}
