use casefind_core::{
    build_index, cosine_similarity, rank, set_similarity, tokenize, Case, Index, PreprocessConfig,
    Query, RankParams, Scorer, SearchParams, SparseVector, TermSet,
};
use casefind_testkit::{random_corpus, random_query, DenseOracle, OracleWeighting, TokenDoc};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_cases(docs: &[TokenDoc]) -> Vec<Case> {
    docs.iter().map(|(id, t)| Case::new(id.clone(), t.join(" "))).collect()
}

fn corpus_from_seed(seed: u64) -> (Vec<TokenDoc>, Index) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let docs = random_corpus(&mut rng, 120, 30, 60);
    let (index, _) = build_index(&to_cases(&docs), &PreprocessConfig::default()).unwrap();
    (docs, index)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn text_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        "\\PC{0,40}",
        "[A-Za-z0-9 ,.!?-]{0,60}",
        prop::collection::vec("[A-Za-zÀ-ÿİΣ]{1,8}", 0..8).prop_map(|w| w.join(" ")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tokens_satisfy_invariants(text in text_strategy(), min_len in 1usize..4, stop in "[a-z]{1,3}") {
        let cfg = PreprocessConfig::new(true, [stop.clone()], min_len).unwrap();
        let toks = tokenize(&text, &cfg);
        for t in &toks {
            prop_assert!(!t.is_empty());
            prop_assert!(t.chars().all(char::is_alphanumeric), "separator in {t:?}");
            let refolded: String = t.chars().map(|c| c.to_lowercase().next().unwrap()).collect();
            prop_assert_eq!(&refolded, t);
            prop_assert!(t.chars().count() >= min_len);
            prop_assert_ne!(t, &stop);
        }
        prop_assert_eq!(tokenize(&text, &cfg), toks);
    }

    #[test]
    fn tokenize_is_idempotent(text in text_strategy()) {
        let cfg = PreprocessConfig::default();
        let once = tokenize(&text, &cfg);
        prop_assert_eq!(tokenize(&once.join(" "), &cfg), once);
    }

    #[test]
    fn word_permutation_preserves_token_multiset(
        words in prop::collection::vec("[A-Za-z0-9-]{1,8}", 1..10),
        perm_seed in any::<u64>(),
    ) {
        let cfg = PreprocessConfig::default();
        let mut shuffled = words.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let mut a = tokenize(&words.join(" "), &cfg).into_vec();
        let mut b = tokenize(&shuffled.join(" "), &cfg).into_vec();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn index_invariants(seed in any::<u64>()) {
        let (docs, index) = corpus_from_seed(seed);
        let n = index.corpus_size();
        prop_assert_eq!(n, docs.len());
        let max_idf = (n as f64).log10();
        for (t, term, df) in index.vocabulary().iter() {
            prop_assert!(df >= 1 && df as usize <= n);
            let idf = index.inverse_document_frequency(term).unwrap();
            prop_assert!((0.0..=max_idf).contains(&idf));
            let posted: Vec<&str> = index.postings(t).iter()
                .map(|p| index.documents()[p.doc as usize].case_id()).collect();
            let containing: Vec<&str> = index.documents().iter()
                .filter(|d| d.count(t) > 0).map(|d| d.case_id()).collect();
            prop_assert_eq!(posted, containing);
        }
        for doc in index.documents() {
            let tf_sum: f64 = doc.counts().iter()
                .map(|&(t, _)| index.term_frequency(index.vocabulary().term(t).unwrap(), doc.case_id()).unwrap())
                .sum();
            prop_assert!((tf_sum - 1.0).abs() <= 1e-12);
            prop_assert_eq!(doc.token_total(), doc.counts().iter().map(|&(_, c)| c).sum::<u32>());
            let recomputed = doc.weights().entries().iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
            prop_assert!(rel_close(doc.norm(), recomputed, 1e-12));
            for &(_, w) in doc.weights().entries() {
                prop_assert!(w >= 0.0);
            }
        }
    }

    #[test]
    fn stored_weights_match_dense_oracle(seed in any::<u64>()) {
        let (docs, index) = corpus_from_seed(seed);
        let oracle = DenseOracle::build(&docs, OracleWeighting::default());
        for (d, id) in oracle.ids.iter().enumerate() {
            for (t, term) in oracle.terms.iter().enumerate() {
                let w = index.tfidf_weight(term, id).unwrap();
                prop_assert!(rel_close(w, oracle.weights[d][t], 1e-12), "{id}/{term}: {w} vs {}", oracle.weights[d][t]);
            }
        }
    }

    #[test]
    fn rebuild_is_deterministic(seed in any::<u64>()) {
        let (docs, index) = corpus_from_seed(seed);
        let (again, _) = build_index(&to_cases(&docs), &PreprocessConfig::default()).unwrap();
        prop_assert_eq!(again.to_json(), index.to_json());
        let reloaded = Index::from_json(&index.to_json()).unwrap();
        prop_assert_eq!(reloaded.to_json(), index.to_json());
    }

    #[test]
    fn rank_is_order_invariant(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let (_, index) = corpus_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for _ in 0..10 {
            let q = random_query(&mut rng, 60);
            let mut shuffled = q.clone();
            rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
            for scorer in [Scorer::Cosine, Scorer::Set] {
                let params = SearchParams { scorer, ..Default::default() };
                prop_assert_eq!(index.search(&q.join(" "), &params), index.search(&shuffled.join(" "), &params));
            }
        }
    }

    #[test]
    fn raising_threshold_never_adds_results(seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (_, index) = corpus_from_seed(seed);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let q = random_query(&mut rng, 60).join(" ");
        let query = index.prepare_query(&q, Scorer::Cosine);
        let low = rank(&index, &query, &RankParams { threshold: lo, top_k: None });
        let high = rank(&index, &query, &RankParams { threshold: hi, top_k: None });
        prop_assert!(high.total_matches <= low.total_matches);
        for h in &high.hits {
            prop_assert!(h.score > hi);
            prop_assert!(low.hits.iter().any(|l| l.case_id == h.case_id));
        }
    }
}

fn sparse_strategy() -> impl Strategy<Value = SparseVector> {
    prop::collection::vec((0u32..40, 0.0f64..10.0), 0..20).prop_map(SparseVector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn cosine_range_symmetry_scale(x in sparse_strategy(), y in sparse_strategy(), a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
        let s = cosine_similarity(&x, &y);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, cosine_similarity(&y, &x));
        let scaled = cosine_similarity(&x.scaled(a), &y.scaled(b));
        prop_assert!((scaled - s).abs() <= 1e-12, "{scaled} vs {s}");
    }

    #[test]
    fn set_range_and_symmetry(x in prop::collection::vec(0u32..30, 0..15), y in prop::collection::vec(0u32..30, 0..15)) {
        let (x, y) = (TermSet::new(x), TermSet::new(y));
        let s = set_similarity(&x, &y);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, set_similarity(&y, &x));
        if !x.is_empty() {
            prop_assert_eq!(set_similarity(&x, &x), 1.0);
        }
    }

    #[test]
    fn set_similarity_is_binary_cosine(x in prop::collection::vec(0u32..30, 0..15), y in prop::collection::vec(0u32..30, 0..15)) {
        let (x, y) = (TermSet::new(x), TermSet::new(y));
        let bx = SparseVector::new(x.ids().iter().map(|&t| (t, 1.0)));
        let by = SparseVector::new(y.ids().iter().map(|&t| (t, 1.0)));
        prop_assert!((set_similarity(&x, &y) - cosine_similarity(&bx, &by)).abs() <= 1e-12);
    }
}

#[test]
fn set_query_keeps_zero_idf_terms() {
    let cases = [Case::new("d1", "a b"), Case::new("d2", "a c")];
    let (index, _) = build_index(&cases, &PreprocessConfig::default()).unwrap();
    let Query::Terms(q) = index.prepare_query("a b", Scorer::Set) else {
        panic!("expected a term-set query");
    };
    assert_eq!(q.set.len(), 2);
    let r = index.search("a b", &SearchParams { scorer: Scorer::Set, ..Default::default() });
    assert_eq!(r.hits[0].case_id, "d1");
    assert_eq!(r.hits[0].score, 1.0);
    assert_eq!(r.total_matches, 2);
}
