//! Binomial coefficients, colexicographic ranking of sorted sets, and
//! combination walkers shared by the census and the search.

/// Exact binomial coefficient, `None` on overflow of `u128`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `binomial` for callers that know the value fits.
pub fn binom(n: u64, k: u64) -> u128 {
    binomial(n, k).expect("binomial coefficient overflows u128")
}

/// Table of `C(m, j)` for `m <= n`, `j <= k`, used for colex ranks.
#[derive(Debug, Clone)]
pub struct BinomTable {
    n: usize,
    k: usize,
    rows: Vec<Vec<u64>>,
}

impl BinomTable {
    /// Panics if any entry overflows `u64`; callers bound `C(n, k)` first.
    pub fn new(n: usize, k: usize) -> Self {
        let mut rows = vec![vec![0u64; n + 2]; k + 1];
        for m in 0..=n + 1 {
            rows[0][m] = 1;
        }
        for j in 1..=k {
            for m in 1..=n + 1 {
                rows[j][m] = rows[j][m - 1]
                    .checked_add(rows[j - 1][m - 1])
                    .expect("binomial table overflow");
            }
        }
        BinomTable { n, k, rows }
    }

    #[inline]
    pub fn get(&self, m: usize, j: usize) -> u64 {
        debug_assert!(j <= self.k && m <= self.n + 1);
        self.rows[j][m]
    }

    /// Colex rank of a strictly increasing set: `sum_i C(s_i, i + 1)`.
    #[inline]
    pub fn rank(&self, set: &[u32]) -> u64 {
        set.iter()
            .enumerate()
            .map(|(i, &s)| self.rows[i + 1][s as usize])
            .sum()
    }

    /// Inverse of [`rank`](Self::rank) for sets of size `k`.
    pub fn unrank(&self, mut rank: u64, k: usize) -> Vec<u32> {
        let mut out = vec![0u32; k];
        let mut hi = self.n;
        for j in (1..=k).rev() {
            // largest m with C(m, j) <= rank
            let mut m = hi;
            while self.rows[j][m] > rank {
                m -= 1;
            }
            out[j - 1] = m as u32;
            rank -= self.rows[j][m];
            hi = m.saturating_sub(1);
        }
        out
    }
}

/// Calls `f` on every `k`-subset of `items` (in lexicographic order of
/// positions). `items` need not be sorted, but subsets preserve its order.
pub fn for_each_combination<F: FnMut(&[u32])>(items: &[u32], k: usize, mut f: F) {
    let len = items.len();
    if k > len {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<u32> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + len - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        i -= 1;
        idx[i] += 1;
        buf[i] = items[idx[i]];
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
            buf[j] = items[idx[j]];
        }
    }
}

/// Advances `set` to the next `k`-subset of `0..n` in lexicographic order.
/// Returns `false` after the last subset.
pub fn next_lex_subset(set: &mut [u32], n: u32) -> bool {
    let k = set.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if set[i] < n - (k - i) as u32 {
            set[i] += 1;
            for j in i + 1..k {
                set[j] = set[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
