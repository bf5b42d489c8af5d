//! Small counting and enumeration helpers shared by every module.

/// Checked binomial coefficient; `None` on overflow of `u64`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `r!` as `u64`, `None` on overflow.
pub fn factorial(r: u64) -> Option<u64> {
    (1..=r).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

/// Advance `c` to the next `k`-subset of `0..n` in lexicographic order.
/// Returns `false` after the last subset.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `k`-subset of `0..n`, lexicographically.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        f(&c);
        if !next_combination(&mut c, n) {
            break;
        }
    }
}

/// All `k`-subsets of `items`, preserving the order of `items`.
pub fn combinations_of<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for_each_combination(items.len(), k, |c| out.push(c.iter().map(|&i| items[i]).collect()));
    out
}

/// All permutations of `0..r` in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..r).collect();
    let mut out = vec![cur.clone()];
    // standard next_permutation
    while let Some(i) = (1..r).rev().find(|&i| cur[i - 1] < cur[i]) {
        let j = (i..r).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Calls `f` on every ordered `r`-tuple of pairwise distinct elements of
/// `0..n`, in lexicographic order.
pub fn for_each_distinct_tuple(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut tuple = vec![0usize; r];
    let mut used = vec![false; n];
    fn rec(pos: usize, n: usize, tuple: &mut [usize], used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if pos == tuple.len() {
            f(tuple);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                tuple[pos] = v;
                rec(pos + 1, n, tuple, used, f);
                used[v] = false;
            }
        }
    }
    rec(0, n, &mut tuple, &mut used, &mut f);
}

/// Number of ordered `r`-tuples of distinct elements from `n`.
pub fn falling_factorial(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    (0..r).try_fold(1u64, |acc, i| acc.checked_mul(n - i))
}
