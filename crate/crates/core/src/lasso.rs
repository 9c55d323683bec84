//! Truth vectors over ultimately periodic time lines.

/// Positions `0..len`, where the successor of `len-1` is `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lasso {
    pub start: usize,
    pub len: usize,
}

impl Lasso {
    pub fn new(start: usize, period: usize) -> Self {
        assert!(period >= 1);
        Lasso {
            start,
            len: start + period,
        }
    }

    pub fn period(&self) -> usize {
        self.len - self.start
    }

    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len {
            i + 1
        } else {
            self.start
        }
    }

    /// The position representing time `t`.
    pub fn position(&self, t: usize) -> usize {
        if t < self.len {
            t
        } else {
            self.start + (t - self.start) % self.period()
        }
    }

    pub fn next(&self, v: &[bool]) -> Vec<bool> {
        (0..self.len).map(|i| v[self.succ(i)]).collect()
    }

    /// Least solution of `u(i) = b(i) ∨ (a(i) ∧ u(succ i))`.
    pub fn until(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let mut u = vec![false; self.len];
        for _ in 0..2 {
            for i in (self.start..self.len).rev() {
                u[i] = b[i] || (a[i] && u[self.succ(i)]);
            }
        }
        for i in (0..self.start).rev() {
            u[i] = b[i] || (a[i] && u[i + 1]);
        }
        u
    }

    /// Greatest solution of `g(i) = a(i) ∧ g(succ i)`.
    pub fn always(&self, a: &[bool]) -> Vec<bool> {
        let on_loop = a[self.start..self.len].iter().all(|&x| x);
        let mut g = vec![false; self.len];
        g[self.start..].fill(on_loop);
        for i in (0..self.start).rev() {
            g[i] = a[i] && g[i + 1];
        }
        g
    }
}
