//! Word-slice bitset helpers used by the stores and the searches.

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn get(words: &[u64], i: usize) -> bool {
    words[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
pub fn set(words: &mut [u64], i: usize) {
    words[i >> 6] |= 1 << (i & 63);
}

#[inline]
pub fn clear(words: &mut [u64], i: usize) {
    words[i >> 6] &= !(1 << (i & 63));
}

pub fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

pub fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

pub fn xor_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

pub fn and_assign(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= y;
    }
}

pub fn and_not_assign(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= !y;
    }
}

pub fn is_empty(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

/// Indices of set bits in increasing order.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

pub fn first_one(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut w = vec![0u64; words_for(len)];
    for i in idx {
        set(&mut w, i);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ones_roundtrip(mut idx in prop::collection::vec(0usize..300, 0..40)) {
            let w = from_indices(300, idx.iter().copied());
            idx.sort_unstable();
            idx.dedup();
            prop_assert_eq!(ones(&w).collect::<Vec<_>>(), idx.clone());
            prop_assert_eq!(count(&w), idx.len());
            prop_assert_eq!(first_one(&w), idx.first().copied());
        }

        #[test]
        fn xor_count_is_symmetric_difference(a in prop::collection::btree_set(0usize..130, 0..30),
                                             b in prop::collection::btree_set(0usize..130, 0..30)) {
            let wa = from_indices(130, a.iter().copied());
            let wb = from_indices(130, b.iter().copied());
            prop_assert_eq!(xor_count(&wa, &wb), a.symmetric_difference(&b).count());
            prop_assert_eq!(and_count(&wa, &wb), a.intersection(&b).count());
        }
    }
}
