//! Star, circle and mode components against the brute-force oracle.

mod support;

use mplus_core::rational::Q;
use mplus_core::vertex::mode_operator;
use mplus_core::zhu::{circ_n, star};

#[test]
fn components_agree_at_rank_two() {
    for wu in 0..=3u32 {
        for wv in 0..=3u32 {
            for mu in support::monomials(2, wu) {
                for mv in support::monomials(2, wv) {
                    let (u, v) = (support::mono_to_core(&mu), support::mono_to_core(&mv));
                    for j in -3..=(wu + wv) as i64 {
                        let got = mode_operator::<Q>(&u, j, &v, None).unwrap();
                        let want = support::to_core(&support::component(&mu, j, &support::single(&mv)));
                        assert_eq!(got, want, "{mu:?}_{j} {mv:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn products_agree_at_rank_two() {
    for wu in 1..=3u32 {
        for wv in 0..=3u32 {
            for mu in support::monomials(2, wu) {
                for mv in support::monomials(2, wv) {
                    let (u, v) = (support::mono_to_core(&mu), support::mono_to_core(&mv));
                    assert_eq!(star(&u, &v).unwrap(), support::to_core(&support::star(&mu, &mv)));
                    for n in 0..=2 {
                        assert_eq!(circ_n(&u, &v, n).unwrap(), support::to_core(&support::circ(&mu, &mv, n)));
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_sanity() {
    // h(-1)_0 h(-1) = 0, h(-1)_1 h(-1) = 1, omega_1 h(-1) = h(-1)
    let h = vec![(1, 1)];
    assert!(support::component(&h, 0, &support::single(&h)).is_empty());
    assert_eq!(support::component(&h, 1, &support::single(&h)), support::single(&vec![]));
    let w = vec![(1, 1), (1, 1)];
    let two_l0 = support::component(&w, 1, &support::single(&h));
    assert_eq!(two_l0, support::single(&h).into_iter().map(|(m, c)| (m, c * Q::from_integer(2.into()))).collect());
}
