mod common;

use common::{random_cf_model, random_instance, random_ratings, rel_close};
use lbg::cf::cf_predict;
use lbg::lbg::{claim1_residual, e_step, log_density_given_topic};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn shapes() -> impl Iterator<Item = (u64, usize, usize, usize)> {
    (0..40u64).map(|seed| {
        let k = 1 + (seed % 3) as usize;
        let n = 2 + (seed % 7) as usize;
        let m = 3 + (seed % 5) as usize;
        (seed, k, n, m)
    })
}

#[test]
fn log_density_matches_direct_product() {
    for (seed, k, n, m) in shapes() {
        let inst = random_instance(seed, k, n, m);
        for j in 0..m {
            for s in 0..k {
                let got = log_density_given_topic(inst.docs.row(j), inst.x.row(j), s, &inst.params).unwrap();
                let want = common::log_density(&inst.dense[j], &inst.keywords[j], s, &inst.params);
                assert!(rel_close(got, want, TOL), "seed {seed} doc {j} topic {s}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn e_step_matches_direct_normalization() {
    for (seed, k, n, m) in shapes() {
        let inst = random_instance(seed, k, n, m);
        let mu = e_step(&inst.docs, &inst.x, &inst.params).unwrap();
        let want = common::posterior(&inst.dense, &inst.keywords, &inst.params);
        for j in 0..m {
            for s in 0..k {
                let got = mu.get(s, j);
                assert!(rel_close(got, want[j][s], TOL), "seed {seed} doc {j} topic {s}: {got} vs {}", want[j][s]);
            }
        }
    }
}

#[test]
fn claim1_residual_matches_explicit_matrices() {
    for (seed, k, n, m) in shapes() {
        let inst = random_instance(seed, k, n, m);
        let mu = e_step(&inst.docs, &inst.x, &inst.params).unwrap();
        let dense_mu: Vec<Vec<f64>> = (0..m).map(|j| mu.column(j).to_vec()).collect();
        let got = claim1_residual(&mu, &inst.params.q, &inst.params.p);
        let want = common::claim1_residual(&dense_mu, &inst.params.q, &inst.params.p);
        assert!(rel_close(got, want, TOL), "seed {seed}: {got} vs {want}");
    }
}

#[test]
fn cf_predict_matches_joint_marginal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..40u64 {
        let k = 1 + (seed % 3) as usize;
        let items = 2 + (seed % 7) as usize;
        let model = random_cf_model(seed, k, items, 5);
        let target = rng.gen_range(0..items);
        let ratings = random_ratings(&mut rng, items, 5, target);
        let (t, dist) = cf_predict(&model, &ratings, target).unwrap();
        let want = common::cf_distribution(&model, &ratings, target);
        for (r, (g, w)) in dist.iter().zip(&want).enumerate() {
            assert!(rel_close(*g, *w, TOL), "seed {seed} rating {}: {g} vs {w}", r + 1);
        }
        let best = want
            .iter()
            .enumerate()
            .fold(0, |b, (i, v)| if *v > want[b] { i } else { b });
        assert_eq!(t as usize, best + 1);
    }
}
