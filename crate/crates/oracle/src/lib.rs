//! Literal, definition-level reference answers for the index structures.
//!
//! Everything in here is quadratic or worse and shares no code with the
//! `csax-core` query path. Tests use these functions to freeze expected
//! values and to cross-check the succinct structures.

use std::collections::BTreeMap;

/// Sorts all suffixes by direct comparison.
pub fn naive_sa<T: Ord>(text: &[T]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa
}

/// `bwt[i] = text[(sa[i] - 1) mod n]`.
pub fn naive_bwt<T: Copy>(text: &[T], sa: &[usize]) -> Vec<T> {
    let n = text.len();
    sa.iter().map(|&p| text[(p + n - 1) % n]).collect()
}

/// Inverse permutation of a suffix array.
pub fn naive_isa(sa: &[usize]) -> Vec<usize> {
    let mut isa = vec![0; sa.len()];
    for (r, &p) in sa.iter().enumerate() {
        isa[p] = r;
    }
    isa
}

/// Sliding-window occurrence count. The empty pattern occurs `n` times.
pub fn naive_count<T: PartialEq>(text: &[T], pattern: &[T]) -> usize {
    naive_positions(text, pattern).len()
}

/// Every start position of `pattern` in `text`, ascending.
pub fn naive_positions<T: PartialEq>(text: &[T], pattern: &[T]) -> Vec<usize> {
    if pattern.is_empty() {
        return (0..text.len()).collect();
    }
    if pattern.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pattern.len())
        .filter(|&i| text[i..i + pattern.len()] == *pattern)
        .collect()
}

/// `|{ j <= i : s[j] = a }|`, with `i = -1` meaning the empty prefix.
pub fn naive_rank<T: PartialEq>(s: &[T], a: &T, i: isize) -> usize {
    if i < 0 {
        return 0;
    }
    s[..=i as usize].iter().filter(|&x| x == a).count()
}

/// Position of the `k`-th (1-based) occurrence of `a`.
pub fn naive_select<T: PartialEq>(s: &[T], a: &T, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    s.iter()
        .enumerate()
        .filter(|(_, x)| *x == a)
        .nth(k - 1)
        .map(|(j, _)| j)
}

/// `<rank_a(i-1), rank_a(j)>` when `a` occurs in `s[i..=j]`, otherwise `None`.
pub fn naive_interval_rank<T: PartialEq>(s: &[T], a: &T, i: usize, j: usize) -> Option<(usize, usize)> {
    if !s[i..=j].contains(a) {
        return None;
    }
    Some((naive_rank(s, a, i as isize - 1), naive_rank(s, a, j as isize)))
}

/// Histogram of `s[l..=r]`.
pub fn naive_histogram<T: Ord + Copy>(s: &[T], l: usize, r: usize) -> BTreeMap<T, usize> {
    let mut h = BTreeMap::new();
    for &x in &s[l..=r] {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// Reverse of `text[..n-1]` with the final sentinel kept in place.
pub fn naive_reverse_with_sentinel<T: Copy>(text: &[T]) -> Vec<T> {
    let n = text.len();
    let mut out: Vec<T> = text[..n - 1].iter().rev().copied().collect();
    out.push(text[n - 1]);
    out
}

/// An internal node of the suffix tree, described by the leaves below it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaiveNode<T> {
    /// First suffix-array rank below the node.
    pub lb: usize,
    /// Last suffix-array rank below the node.
    pub rb: usize,
    /// Length of the path label.
    pub depth: usize,
    pub label: Vec<T>,
    /// `(first edge symbol, leaves below)` for each child, in symbol order.
    pub children: Vec<(T, usize)>,
}

impl<T> NaiveNode<T> {
    pub fn leaves(&self) -> usize {
        self.rb - self.lb + 1
    }
}

/// Builds the compacted trie of all suffixes by recursive partitioning and
/// returns its internal nodes (root included when `n >= 2`), sorted by
/// `(lb, rb descending)` which is preorder.
pub fn naive_suffix_tree<T: Ord + Copy>(text: &[T]) -> Vec<NaiveNode<T>> {
    let sa = naive_sa(text);
    let isa = naive_isa(&sa);
    let mut out = Vec::new();
    let all: Vec<usize> = (0..text.len()).collect();
    if text.len() >= 2 {
        expand(text, &isa, all, 0, &mut out);
    }
    out.sort_by(|a, b| a.lb.cmp(&b.lb).then(b.rb.cmp(&a.rb)));
    out
}

fn expand<T: Ord + Copy>(
    text: &[T],
    isa: &[usize],
    suffixes: Vec<usize>,
    mut depth: usize,
    out: &mut Vec<NaiveNode<T>>,
) {
    loop {
        let mut groups: BTreeMap<T, Vec<usize>> = BTreeMap::new();
        for &s in &suffixes {
            // suffixes are distinct and sentinel-terminated, so s + depth stays in range
            groups.entry(text[s + depth]).or_default().push(s);
        }
        if groups.len() == 1 {
            depth += 1;
            continue;
        }
        let lb = suffixes.iter().map(|&s| isa[s]).min().unwrap();
        let rb = suffixes.iter().map(|&s| isa[s]).max().unwrap();
        let start = suffixes[0];
        out.push(NaiveNode {
            lb,
            rb,
            depth,
            label: text[start..start + depth].to_vec(),
            children: groups.iter().map(|(&c, g)| (c, g.len())).collect(),
        });
        for (_, g) in groups {
            if g.len() > 1 {
                expand(text, isa, g, depth + 1, out);
            }
        }
        return;
    }
}

/// All strings that label internal nodes, as a lookup set.
pub fn naive_internal_labels<T: Ord + Copy>(text: &[T]) -> std::collections::BTreeSet<Vec<T>> {
    naive_suffix_tree(text).into_iter().map(|n| n.label).collect()
}
