use alloc::vec::Vec;

/// k-subsets of `0..n` in lexicographic order, optionally restricted to
/// subsets whose smallest element is fixed.
pub(crate) struct Combinations {
    n: usize,
    current: Vec<usize>,
    first_fixed: bool,
    started: bool,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations { n, current: (0..k).collect(), first_fixed: false, started: false, done: k > n }
    }

    /// Only subsets whose smallest element is `first`.
    pub(crate) fn with_first(n: usize, k: usize, first: usize) -> Self {
        let done = k == 0 || first + k > n;
        Combinations { n, current: (first..first + k).collect(), first_fixed: true, started: false, done }
    }

    pub(crate) fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let lowest = usize::from(self.first_fixed);
        let mut i = k;
        loop {
            if i <= lowest {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.n - (k - i) {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}
