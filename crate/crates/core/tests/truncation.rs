mod common;

use common::*;
use crossnorm::bipartite::BipartiteVector;
use crossnorm::cross_norm::{upper_bound_spectral, witness_value};
use crossnorm::truncation::{
    dense_check, divergent_lower_bound, mixing_lower_bound, truncated_l2_not_l1, Background,
    BlockFamily, Level,
};
use crossnorm::{CMatrix, SeeSawConfig};
use proptest::prelude::*;

fn family_strategy() -> impl Strategy<Value = BlockFamily> {
    prop::collection::vec((0.05f64..1.0, 1usize..=4), 1..=3).prop_map(|raw| {
        let total: f64 = raw.iter().map(|(w, _)| w).sum();
        let levels = raw
            .into_iter()
            .map(|(w, m)| Level { weight: w / total * 0.999, block_dim: m })
            .collect();
        BlockFamily::new(levels).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn blockwise_bounds_agree_with_dense(fam in family_strategy()) {
        let n = fam.len();
        let b = divergent_lower_bound(&fam, n).unwrap();
        let d = fam.dense(n).unwrap();
        let c = fam.block_vector(n, b.witness_level).unwrap();
        prop_assert!((witness_value(&d, &c).unwrap() - b.witness).abs() < 1e-9);
        let (upper, dec) = upper_bound_spectral(&d).unwrap();
        prop_assert!(dec.validate(&d).valid);
        prop_assert!(b.value() <= upper + 1e-9);
    }

    #[test]
    fn mixing_blockwise_matches_dense(p in 0.05f64..=1.0, n in 1usize..=8) {
        let (v, pure) = truncated_l2_not_l1(8).unwrap();
        let b = mixing_lower_bound(p, &v, &Background::MaximallyMixed, n).unwrap();
        let dim = v.shape().dim();
        let d = operator(v.shape(), v.projector().matrix().scale(p) + CMatrix::identity(dim, dim).scale((1.0 - p) / dim as f64));
        let f = crossnorm::bipartite::schmidt_decompose(&v).unwrap();
        let cn: BipartiteVector = f.flat_sum(n);
        let dense = cn.inner(&d.apply(&cn).unwrap()).re;
        prop_assert!((b.value - dense).abs() < 1e-9);
        if n == 8 {
            prop_assert!(p * pure <= b.value + 1e-12);
        }
    }
}

#[test]
fn preset_grows_as_closed_form() {
    let fam = BlockFamily::dyadic_preset(3);
    let mut prev = 0.0;
    for n in 1..=3 {
        let b = divergent_lower_bound(&fam, n).unwrap();
        let closed = (2f64.powi(n as i32 + 1) - 2.0) / n as f64;
        assert!((b.lemosd - closed).abs() < 1e-12);
        assert!(b.value() > prev);
        prev = b.value();
    }
}

#[test]
fn preset_dense_cross_check() {
    let fam = BlockFamily::dyadic_preset(2);
    let cfg = SeeSawConfig { restarts: 4, ..SeeSawConfig::with_seed(0) };
    for n in 1..=2 {
        let chk = dense_check(&fam, n, &cfg).unwrap();
        let b = divergent_lower_bound(&fam, n).unwrap();
        assert!((chk.block_witness_value - b.witness).abs() < 1e-9);
        let d = fam.dense(n).unwrap();
        let (upper, dec) = upper_bound_spectral(&d).unwrap();
        assert!(dec.validate(&d).valid);
        assert!(chk.pi_lower <= upper + 1e-8);
        assert!(b.value() <= upper + 1e-8);
        assert!((chk.trace_norm - trace_norm_oracle(d.matrix())).abs() < 1e-9);
    }
}
