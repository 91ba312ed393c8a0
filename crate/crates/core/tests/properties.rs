use csax::bitvec::BitVec;
use csax::fm_index::FMIndex;
use csax::interval_rank::IntervalRankIndex;
use csax::sequence::SequenceIndex;
use csax::{BuildOptions, QueryStats, SelfIndex, Text};
use csax_oracle::{naive_count, naive_interval_rank, naive_positions, naive_rank, naive_sa, naive_select};
use proptest::prelude::*;

fn coded(raw: &[u32]) -> Vec<u32> {
    let mut t: Vec<u32> = raw.iter().map(|&x| x + 1).collect();
    t.push(0);
    t
}

fn text_strategy() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (1usize..=40).prop_flat_map(|sigma| (Just(sigma + 1), prop::collection::vec(0..sigma as u32, 0..400)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bitvec_rank_select(bits in prop::collection::vec(any::<bool>(), 0..3000)) {
        let bv = BitVec::from_bits(bits.iter().copied());
        let ones = bits.iter().filter(|&&b| b).count();
        prop_assert_eq!(bv.count_ones(), ones);
        for i in 0..bits.len() {
            prop_assert_eq!(bv.rank1(i).unwrap(), naive_rank(&bits, &true, i as isize));
            prop_assert_eq!(bv.rank0(i).unwrap() + bv.rank1(i).unwrap(), i + 1);
        }
        for k in 1..=ones {
            let p = bv.select1(k).unwrap();
            prop_assert_eq!(Some(p), naive_select(&bits, &true, k));
            prop_assert_eq!(bv.rank1(p).unwrap(), k);
        }
        prop_assert!(bv.select1(ones + 1).is_err());
    }

    #[test]
    fn sequence_queries((sigma, raw) in text_strategy()) {
        let s: Vec<u32> = raw.iter().map(|&x| x + 1).collect();
        let seq = SequenceIndex::new(&s, sigma).unwrap();
        for i in 0..s.len() {
            prop_assert_eq!(seq.access(i).unwrap(), s[i]);
            prop_assert_eq!(seq.partial_rank(i).unwrap(), naive_rank(&s, &s[i], i as isize));
            for a in [s[i], (s[i] + 1) % sigma as u32] {
                prop_assert_eq!(seq.rank(a, i).unwrap(), naive_rank(&s, &a, i as isize));
                prop_assert_eq!(seq.rank_via_chunks(a, i).unwrap(), naive_rank(&s, &a, i as isize));
            }
        }
        for a in 0..sigma as u32 {
            let c = naive_rank(&s, &a, s.len() as isize - 1);
            for k in 1..=c {
                prop_assert_eq!(Some(seq.select(a, k).unwrap()), naive_select(&s, &a, k));
            }
        }
        if !s.is_empty() {
            let l = s.len() / 3;
            let r = s.len() - 1;
            let hist = seq.distinct_symbols(l, r).unwrap();
            let mut expect = std::collections::BTreeMap::new();
            for &x in &s[l..=r] {
                *expect.entry(x).or_insert(0usize) += 1;
            }
            prop_assert_eq!(hist, expect.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn interval_rank_windows((sigma, raw) in text_strategy()) {
        let s = raw;
        let seq = SequenceIndex::new(&s, sigma).unwrap();
        let irx = IntervalRankIndex::new(&seq);
        let g = irx.group_size();
        for i in 0..s.len() {
            for j in i..s.len().min(i + g + 1) {
                for a in 0..sigma as u32 {
                    prop_assert_eq!(irx.rank_pair(&seq, a, i, j).unwrap(), naive_interval_rank(&s, &a, i, j));
                }
            }
        }
        if s.len() > g + 1 {
            prop_assert!(irx.rank_pair(&seq, 0, 0, g + 1).is_err());
        }
    }

    #[test]
    fn lf_is_permutation_and_shifts_sa((sigma, raw) in text_strategy()) {
        let t = Text::from_symbols(coded(&raw), sigma).unwrap();
        let fm = FMIndex::new(&t, 3).unwrap();
        let mut rev: Vec<u32> = t.symbols()[..t.len() - 1].iter().rev().copied().collect();
        rev.push(0);
        let sa = naive_sa(&rev);
        let n = sa.len();
        let mut seen = vec![false; n];
        for j in 0..n {
            let k = fm.lf(j).unwrap();
            prop_assert!(!seen[k]);
            seen[k] = true;
            prop_assert_eq!(sa[k], (sa[j] + n - 1) % n);
        }
    }

    #[test]
    fn search_locate_extract((sigma, raw) in text_strategy(), picks in prop::collection::vec((any::<u16>(), 1usize..20), 12), b in 1usize..9) {
        let coded_text = coded(&raw);
        let t = Text::from_symbols(coded_text.clone(), sigma).unwrap();
        let (idx, _) = SelfIndex::build_text(&t, &BuildOptions { sample_rate: Some(b), ..Default::default() }).unwrap();
        let body = &coded_text[..coded_text.len() - 1];
        for (k, &(start, m)) in picks.iter().enumerate() {
            let pat: Vec<u32> = if k % 2 == 0 && !body.is_empty() {
                let i = start as usize % body.len();
                body[i..(i + m).min(body.len())].to_vec()
            } else {
                (0..m).map(|x| (start as u32 + 7 * x as u32) % sigma as u32).collect()
            };
            let out = idx.search_symbols(&pat);
            let expect = if pat.contains(&0) { 0 } else { naive_count(body, &pat) };
            prop_assert_eq!(out.count(), expect);
            prop_assert!(out.stats.general_rank <= 2);
            if expect > 0 {
                prop_assert_eq!(idx.locate_symbols(&pat), naive_positions(body, &pat));
            }
            // widths never grow along the pattern
            let mut prev = idx.len();
            for p in 1..=pat.len() {
                let w = idx.search_symbols(&pat[..p]).count();
                prop_assert!(w <= prev);
                prev = w;
            }
        }
        let n = t.len();
        for &(start, m) in &picks {
            let i = start as usize % n;
            let len = m.min(n - i);
            prop_assert_eq!(idx.extract_symbols(i, len).unwrap(), &t.symbols()[i..i + len]);
        }
    }

    #[test]
    fn uniformity_test_agrees_with_scan((sigma, raw) in text_strategy(), l0 in any::<u16>(), w in 0usize..12) {
        let t = Text::from_symbols(coded(&raw), sigma).unwrap();
        let fm = FMIndex::new(&t, 4).unwrap();
        let n = fm.len();
        let l = l0 as usize % n;
        let r = (l + w).min(n - 1);
        let window: Vec<u32> = (l..=r).map(|i| fm.bwt().access(i).unwrap()).collect();
        let expect = window.iter().all(|&c| c == window[0]).then_some(window[0]);
        prop_assert_eq!(fm.uniform_symbol(l, r, &mut QueryStats::default()), expect);
    }

    #[test]
    fn serialization_round_trip(bytes in prop::collection::vec(1u8..=255, 0..600), pats in prop::collection::vec(prop::collection::vec(1u8..=255, 1..4), 5)) {
        let idx = SelfIndex::build(&bytes, None).unwrap();
        let back = SelfIndex::from_bytes(&idx.to_bytes()).unwrap();
        for p in &pats {
            prop_assert_eq!(back.count(p), idx.count(p));
            prop_assert_eq!(back.count_locate(p), idx.count_locate(p));
        }
        prop_assert_eq!(back.extract(0, bytes.len()).unwrap(), bytes);
    }
}
