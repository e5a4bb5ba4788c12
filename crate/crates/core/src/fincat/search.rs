//! Backtracking search for functors with forced-composite propagation.

use super::{Arr, FinCategory, Functor, Obj, NONE};
use crate::error::{Error, Result};

pub(crate) struct FunctorSearch<'a> {
    c: &'a FinCategory,
    d: &'a FinCategory,
    iso: bool,
    budget: u64,
    steps: u64,
    limit: usize,
    obj: Vec<Obj>,
    arr: Vec<u32>,
    used_obj: Vec<bool>,
    used_arr: Vec<bool>,
    assigned: Vec<Arr>,
    found: Vec<Functor>,
}

impl<'a> FunctorSearch<'a> {
    /// `iso` restricts to functors bijective on objects and arrows.
    pub(crate) fn new(c: &'a FinCategory, d: &'a FinCategory, iso: bool, budget: u64, limit: usize) -> Self {
        FunctorSearch {
            c,
            d,
            iso,
            budget,
            steps: 0,
            limit,
            obj: vec![usize::MAX; c.num_objects()],
            arr: vec![NONE; c.num_arrows()],
            used_obj: vec![false; d.num_objects()],
            used_arr: vec![false; d.num_arrows()],
            assigned: Vec::new(),
            found: Vec::new(),
        }
    }

    pub(crate) fn run(mut self) -> Result<Vec<Functor>> {
        if self.iso && (self.c.num_objects() != self.d.num_objects() || self.c.num_arrows() != self.d.num_arrows()) {
            return Ok(Vec::new());
        }
        self.objects(0)?;
        Ok(self.found)
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::BudgetExceeded { what: "functor enumeration", limit: self.budget })
        } else {
            Ok(())
        }
    }

    fn done(&self) -> bool {
        self.found.len() >= self.limit
    }

    fn objects(&mut self, o: Obj) -> Result<()> {
        if o == self.c.num_objects() {
            let mark = self.assigned.len();
            let mut ok = true;
            for x in self.c.objects() {
                if !self.assign(self.c.id(x), self.d.id(self.obj[x])) {
                    ok = false;
                    break;
                }
            }
            if ok && self.propagate(mark) {
                self.arrows(0)?;
            }
            self.undo(mark);
            return Ok(());
        }
        for cand in self.d.objects() {
            if self.done() {
                break;
            }
            if self.iso && self.used_obj[cand] {
                continue;
            }
            self.tick()?;
            self.obj[o] = cand;
            if self.objects_consistent(o) {
                self.used_obj[cand] = true;
                self.objects(o + 1)?;
                self.used_obj[cand] = false;
            }
            self.obj[o] = usize::MAX;
        }
        Ok(())
    }

    fn objects_consistent(&self, o: Obj) -> bool {
        for p in 0..=o {
            for (a, b) in [(o, p), (p, o)] {
                let hc = self.c.hom(a, b).len();
                let hd = self.d.hom(self.obj[a], self.obj[b]).len();
                if self.iso {
                    if hc != hd {
                        return false;
                    }
                } else if hc > 0 && hd == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn arrows(&mut self, from: Arr) -> Result<()> {
        let Some(f) = (from..self.c.num_arrows()).find(|&f| self.arr[f] == NONE) else {
            self.found.push(Functor { obj: self.obj.clone(), arr: self.arr.iter().map(|&x| x as Arr).collect() });
            return Ok(());
        };
        let (s, t) = (self.obj[self.c.src(f)], self.obj[self.c.tgt(f)]);
        let cands = self.d.hom(s, t).to_vec();
        for cand in cands {
            if self.done() {
                break;
            }
            if self.iso && self.used_arr[cand] {
                continue;
            }
            self.tick()?;
            let mark = self.assigned.len();
            if self.assign(f, cand) && self.propagate(mark) {
                self.arrows(f + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    fn assign(&mut self, f: Arr, img: Arr) -> bool {
        match self.arr[f] {
            NONE => {
                if self.iso && self.used_arr[img] {
                    return false;
                }
                self.arr[f] = img as u32;
                if self.iso {
                    self.used_arr[img] = true;
                }
                self.assigned.push(f);
                true
            }
            v => v as Arr == img,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let f = self.assigned.pop().unwrap();
            if self.iso {
                self.used_arr[self.arr[f] as usize] = false;
            }
            self.arr[f] = NONE;
        }
    }

    fn propagate(&mut self, mark: usize) -> bool {
        let mut qi = mark;
        while qi < self.assigned.len() {
            let a = self.assigned[qi];
            qi += 1;
            let mut j = 0;
            while j < self.assigned.len() {
                let b = self.assigned[j];
                j += 1;
                for (x, y) in [(a, b), (b, a)] {
                    if let Some(p) = self.c.compose(x, y) {
                        let img = self.d.comp(self.arr[x] as Arr, self.arr[y] as Arr);
                        if !self.assign(p, img) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
