//! Backtracking search for isomorphisms between Cayley tables whose
//! elements have been partitioned into invariant cells.
//!
//! A bijection is determined by the images of a generating sequence; after
//! each choice the partial map is closed under products, which either fixes
//! the images of the generated substructure or exposes a contradiction.

use crate::loops::CayleyTable;
use crate::perm::Permutation;

const NONE: u16 = u16::MAX;

/// A table together with an invariant partition and a generating sequence.
#[derive(Clone, Debug)]
pub(crate) struct Partitioned<'a> {
    pub table: &'a CayleyTable,
    /// Cell id of every element. Ids of two tables are comparable only when
    /// the tables have equal sorted invariant multisets.
    pub cell: Vec<u32>,
    /// Members of every cell, ascending.
    pub cells: Vec<Vec<u16>>,
    /// Elements that generate the table from `seed`.
    pub gens: Vec<u16>,
    /// Elements fixed by every map (the identity of a loop, or nothing).
    pub seed: Vec<u16>,
}

impl<'a> Partitioned<'a> {
    /// Ranks `keys` into cell ids and picks a generating sequence greedily
    /// from the smallest cells.
    pub fn new<K: Ord>(table: &'a CayleyTable, keys: &[K], seed: Vec<u16>) -> Self {
        let n = table.order();
        let mut sorted: Vec<&K> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let cell: Vec<u32> = keys
            .iter()
            .map(|k| sorted.binary_search(&k).expect("key present") as u32)
            .collect();
        let mut cells = vec![Vec::new(); sorted.len()];
        for x in 0..n {
            cells[cell[x] as usize].push(x as u16);
        }
        let mut order: Vec<u16> = (0..n as u16).collect();
        order.sort_by_key(|&x| (cells[cell[x as usize] as usize].len(), x));
        let mut inside = vec![false; n];
        let mut members: Vec<u16> = Vec::new();
        let mut gens = Vec::new();
        let close = |inside: &mut Vec<bool>, members: &mut Vec<u16>, x: u16| {
            if inside[x as usize] {
                return;
            }
            inside[x as usize] = true;
            members.push(x);
            let mut i = members.len() - 1;
            while i < members.len() {
                let u = members[i] as usize;
                let mut j = 0;
                while j < members.len() {
                    let w = members[j] as usize;
                    for v in [table.mul(u, w), table.mul(w, u)] {
                        if !inside[v] {
                            inside[v] = true;
                            members.push(v as u16);
                        }
                    }
                    j += 1;
                }
                i += 1;
            }
        };
        for &s in &seed {
            close(&mut inside, &mut members, s);
        }
        for &x in &order {
            if members.len() == n {
                break;
            }
            if !inside[x as usize] {
                gens.push(x);
                close(&mut inside, &mut members, x);
            }
        }
        Self {
            table,
            cell,
            cells,
            gens,
            seed,
        }
    }
}

/// Mutable state of one search between `a` and `b`.
pub(crate) struct Search<'s, 'a> {
    a: &'s Partitioned<'a>,
    b: &'s Partitioned<'a>,
    map: Vec<u16>,
    inv: Vec<u16>,
    mapped: Vec<u16>,
    queue: Vec<(u16, u16)>,
    pub nodes: u64,
}

impl<'s, 'a> Search<'s, 'a> {
    pub fn new(a: &'s Partitioned<'a>, b: &'s Partitioned<'a>) -> Self {
        let n = a.table.order();
        Self {
            a,
            b,
            map: vec![NONE; n],
            inv: vec![NONE; n],
            mapped: Vec::with_capacity(n),
            queue: Vec::new(),
            nodes: 0,
        }
    }

    pub fn mark(&self) -> usize {
        self.mapped.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.mapped.len() > mark {
            let u = self.mapped.pop().expect("nonempty") as usize;
            self.inv[self.map[u] as usize] = NONE;
            self.map[u] = NONE;
        }
    }

    /// Sets `x ↦ y` and closes under products. On failure the state may be
    /// partially extended; callers undo to a mark.
    pub fn assign(&mut self, x: u16, y: u16) -> bool {
        let ta = self.a.table;
        let tb = self.b.table;
        self.queue.clear();
        self.queue.push((x, y));
        while let Some((u, v)) = self.queue.pop() {
            let (ui, vi) = (u as usize, v as usize);
            if self.map[ui] == v {
                continue;
            }
            if self.map[ui] != NONE || self.inv[vi] != NONE || self.a.cell[ui] != self.b.cell[vi] {
                return false;
            }
            self.map[ui] = v;
            self.inv[vi] = u;
            self.mapped.push(u);
            for j in 0..self.mapped.len() {
                let w = self.mapped[j] as usize;
                let fw = self.map[w] as usize;
                self.queue.push((ta.mul(ui, w) as u16, tb.mul(vi, fw) as u16));
                self.queue.push((ta.mul(w, ui) as u16, tb.mul(fw, vi) as u16));
            }
        }
        true
    }

    /// Maps every seed element to itself.
    pub fn assign_seed(&mut self) -> bool {
        let seed = self.a.seed.clone();
        seed.into_iter().all(|s| self.assign(s, s))
    }

    /// Extends the current partial map through generators `level..`.
    pub fn extend(&mut self, level: usize) -> Option<Permutation> {
        self.nodes += 1;
        let Some(&x) = self.a.gens.get(level) else {
            let images = self.map.clone();
            if images.contains(&NONE) {
                return None;
            }
            let phi = Permutation::from_raw(images);
            return self.a.table.is_isomorphism_onto(self.b.table, &phi).then_some(phi);
        };
        if self.map[x as usize] != NONE {
            return self.extend(level + 1);
        }
        let cell = self.a.cell[x as usize] as usize;
        for &y in &self.b.cells[cell] {
            if self.inv[y as usize] != NONE {
                continue;
            }
            let mark = self.mark();
            if self.assign(x, y) {
                if let Some(phi) = self.extend(level + 1) {
                    return Some(phi);
                }
            }
            self.undo(mark);
        }
        None
    }
}

/// An isomorphism `a → b`, if one exists. Requires comparable cell ids.
pub(crate) fn find_isomorphism(a: &Partitioned, b: &Partitioned) -> Option<Permutation> {
    if a.table.order() != b.table.order() || a.cells.len() != b.cells.len() {
        return None;
    }
    if a.cells.iter().zip(&b.cells).any(|(x, y)| x.len() != y.len()) {
        return None;
    }
    let mut s = Search::new(a, b);
    if !s.assign_seed() {
        return None;
    }
    s.extend(0)
}
