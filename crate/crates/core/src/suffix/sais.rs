//! Suffix array by induced sorting (SA-IS), and Kasai's LCP.

const EMPTY: usize = usize::MAX;

/// Suffix array of `s`, which must end with a unique smallest symbol `0`.
/// All symbols must be `< k`.
pub(crate) fn suffix_array(s: &[u32], k: usize) -> Vec<usize> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        _ => {}
    }
    debug_assert_eq!(s[n - 1], 0);

    // true = S-type
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut counts = vec![0usize; k];
    for &c in s {
        counts[c as usize] += 1;
    }
    let starts = |out: &mut Vec<usize>| {
        out.clear();
        let mut sum = 0;
        for &c in &counts {
            out.push(sum);
            sum += c;
        }
    };
    let ends = |out: &mut Vec<usize>| {
        out.clear();
        let mut sum = 0;
        for &c in &counts {
            sum += c;
            out.push(sum);
        }
    };
    let mut bucket = Vec::with_capacity(k);

    let induce = |sa: &mut [usize], bucket: &mut Vec<usize>| {
        starts(bucket);
        for j in 0..n {
            let p = sa[j];
            if p != EMPTY && p > 0 && !stype[p - 1] {
                let c = s[p - 1] as usize;
                sa[bucket[c]] = p - 1;
                bucket[c] += 1;
            }
        }
        ends(bucket);
        for j in (0..n).rev() {
            let p = sa[j];
            if p != EMPTY && p > 0 && stype[p - 1] {
                let c = s[p - 1] as usize;
                bucket[c] -= 1;
                sa[bucket[c]] = p - 1;
            }
        }
    };

    // Stage 1: sort LMS substrings.
    let mut sa = vec![EMPTY; n];
    ends(&mut bucket);
    for i in (1..n).rev() {
        if is_lms(i) {
            let c = s[i] as usize;
            bucket[c] -= 1;
            sa[bucket[c]] = i;
        }
    }
    induce(&mut sa, &mut bucket);

    // Compact sorted LMS positions to the front.
    let mut m = 0;
    for j in 0..n {
        if is_lms(sa[j]) {
            sa[m] = sa[j];
            m += 1;
        }
    }
    for x in sa[m..].iter_mut() {
        *x = EMPTY;
    }

    // Name LMS substrings; names stored at m + pos/2 (LMS positions are >= 2 apart).
    let lms_equal = |a: usize, b: usize| -> bool {
        if a == n - 1 || b == n - 1 {
            return a == b;
        }
        let mut d = 0;
        loop {
            if s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
                return false;
            }
            if d > 0 {
                let (ea, eb) = (is_lms(a + d), is_lms(b + d));
                if ea || eb {
                    return ea && eb;
                }
            }
            d += 1;
        }
    };
    let mut name = 0usize;
    let mut prev = EMPTY;
    for j in 0..m {
        let p = sa[j];
        if prev == EMPTY || !lms_equal(prev, p) {
            name += 1;
        }
        prev = p;
        sa[m + p / 2] = name - 1;
    }
    let mut reduced = Vec::with_capacity(m);
    let mut lms_pos = Vec::with_capacity(m);
    for i in 1..n {
        if is_lms(i) {
            lms_pos.push(i);
        }
    }
    for &p in &lms_pos {
        reduced.push(sa[m + p / 2] as u32);
    }

    // Stage 2: sort the reduced problem.
    let reduced_sa = if name < m {
        suffix_array(&reduced, name)
    } else {
        let mut r = vec![0usize; m];
        for (i, &c) in reduced.iter().enumerate() {
            r[c as usize] = i;
        }
        r
    };

    // Stage 3: place LMS suffixes in final order and induce.
    sa.iter_mut().for_each(|x| *x = EMPTY);
    ends(&mut bucket);
    for &r in reduced_sa.iter().rev() {
        let p = lms_pos[r];
        let c = s[p] as usize;
        bucket[c] -= 1;
        sa[bucket[c]] = p;
    }
    induce(&mut sa, &mut bucket);
    sa
}

/// `lcp[i]` = longest common prefix of suffixes `sa[i-1]` and `sa[i]`; `lcp[0] = 0`.
pub(crate) fn lcp_array(s: &[u32], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0usize; n];
    for (r, &p) in sa.iter().enumerate() {
        rank[p] = r;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use csax_oracle::naive_sa;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn with_sentinel(v: &[u32]) -> Vec<u32> {
        let mut t: Vec<u32> = v.iter().map(|&x| x + 1).collect();
        t.push(0);
        t
    }

    #[test]
    fn banana() {
        // $=0 a=1 b=2 n=3
        let t = [2, 1, 3, 1, 3, 1, 0];
        assert_eq!(suffix_array(&t, 4), vec![6, 5, 3, 1, 0, 4, 2]);
        assert_eq!(lcp_array(&t, &[6, 5, 3, 1, 0, 4, 2]), vec![0, 0, 1, 3, 0, 0, 2]);
    }

    #[test]
    fn degenerate() {
        assert_eq!(suffix_array(&[0], 1), vec![0]);
        let t = with_sentinel(&[0; 50]);
        assert_eq!(suffix_array(&t, 2), (0..51).rev().collect::<Vec<_>>());
    }

    #[test]
    fn random_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &sigma in &[1u32, 2, 3, 4, 16, 64, 256] {
            for _ in 0..30 {
                let n = rng.gen_range(0..2000);
                let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
                let t = with_sentinel(&raw);
                assert_eq!(suffix_array(&t, sigma as usize + 1), naive_sa(&t));
            }
        }
    }

    #[test]
    fn repetitive_matches_naive() {
        for period in 1..6u32 {
            let raw: Vec<u32> = (0..997).map(|i| (i % period) + (i % 7 == 0) as u32).collect();
            let t = with_sentinel(&raw);
            assert_eq!(suffix_array(&t, 8), naive_sa(&t));
        }
    }
}
