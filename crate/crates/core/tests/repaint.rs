use checkers::gen;
use checkers::types::{check_derivation, enumerate_typings, Ty, TypeBound};
use checkers::whiten::{check_whitening, decide_whitening, multirepaint, repaint_one, variants, Direction, Polarity, WObj};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bound() -> TypeBound {
    TypeBound { limit: 300, ..TypeBound::new(2, 3) }
}

#[test]
fn repaint_one_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut cases, mut shifted) = (0, 0);
    while cases < 300 {
        let size = rng.gen_range(1..7);
        let t = gen::term(&mut rng, size, &["x", "y"], true);
        let Ok(en) = enumerate_typings(&t, bound(), 2000) else { continue };
        for (_, d) in en.typings.iter().take(4) {
            let here = WObj::Pair(d.env.clone(), d.ty.clone());
            let steps: Vec<_> =
                variants(Polarity::Negative, &here, Direction::Whiter).into_iter().filter(|(_, k)| *k == 1).collect();
            if steps.is_empty() {
                continue;
            }
            let (goal, _) = &steps[rng.gen_range(0..steps.len())];
            let w = decide_whitening(Polarity::Negative, goal, &here).unwrap();
            let r = repaint_one(d, &w).unwrap_or_else(|e| panic!("{t}: {e}\n{d:?}\n{goal}"));
            check_derivation(&r.derivation).unwrap();
            check_whitening(&r.witness).unwrap();
            assert_eq!(r.derivation.term, d.term);
            assert!(r.derivation.index.abs_diff(d.index) <= 1 - r.i);
            shifted += 1 - r.i;
            cases += 1;
        }
    }
    assert!(shifted > 0);
}

#[test]
fn multirepaint_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = 0;
    while cases < 200 {
        let size = rng.gen_range(1..7);
        let t = gen::term(&mut rng, size, &["x", "y"], true);
        let Ok(en) = enumerate_typings(&t, bound(), 2000) else { continue };
        for (_, d) in en.typings.iter().take(3) {
            let here = WObj::Pair(d.env.clone(), d.ty.clone());
            let goals: Vec<_> =
                variants(Polarity::Negative, &here, Direction::Whiter).into_iter().filter(|(_, k)| *k >= 1).collect();
            if goals.is_empty() {
                continue;
            }
            let (goal, k1) = &goals[rng.gen_range(0..goals.len())];
            let w = decide_whitening(Polarity::Negative, goal, &here).unwrap();
            let r = multirepaint(d, &w).unwrap_or_else(|e| panic!("{t}: {e}"));
            check_derivation(&r.derivation).unwrap();
            check_whitening(&r.witness).unwrap();
            assert!(r.k2 <= *k1);
            assert!(r.derivation.index.abs_diff(d.index) <= k1 - r.k2);
            assert!(matches!(r.derivation.ty, Ty::Linear(_)));
            cases += 1;
        }
    }
}
