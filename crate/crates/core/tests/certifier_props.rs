use proptest::prelude::*;

use resist_core::arrays::builtin_ca_10_7_3_3;
use resist_core::certificate::emit_certificate;
use resist_core::certifier::{certify_code_resistant, certify_dicke_strong, CodeOptions};
use resist_core::dicke::{is_k_mixture, reduce_combo, DickeCombo, DickeMixture};
use resist_core::families::{psi_n_minus_3, psi_n_minus_4, psi_n_minus_5, threshold_ratio_n3};
use resist_core::scalar::{integer, rational, ExactScalar, Limits};
use resist_core::separability::{dicke_separable, ppt_all_bipartitions, VerdictKind};

fn positive() -> impl Strategy<Value = ExactScalar> {
    (1i64..500, 1i64..500).prop_map(|(p, q)| rational(p, q))
}

fn family_instance() -> impl Strategy<Value = (DickeCombo, usize)> {
    prop_oneof![
        (7usize..=12).prop_map(|n| (psi_n_minus_4(n, &integer(1), &integer(1)).unwrap(), n - 4)),
        (7usize..=12).prop_map(|n| {
            let a2 = threshold_ratio_n3(n).unwrap();
            (psi_n_minus_3(n, &a2, &integer(1)).unwrap(), n - 3)
        }),
        (13usize..=15).prop_map(|n| (psi_n_minus_5(n, &integer(1), &integer(2)).unwrap(), n - 5)),
    ]
}

fn two_term_combo() -> impl Strategy<Value = DickeCombo> {
    (5usize..=12)
        .prop_flat_map(|n| (Just(n), 0..=n, 0..=n, positive(), positive()))
        .prop_filter_map("distinct indices", |(n, i, j, a, b)| {
            (i != j).then(|| DickeCombo::new(n, [(i, a), (j, b)]).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dicke_outcomes_ignore_scaling((combo, m) in family_instance(), f in positive()) {
        let base = certify_dicke_strong(&combo, m).unwrap();
        let scaled = certify_dicke_strong(&combo.scaled(&f), m).unwrap();
        prop_assert_eq!(base.outcome, scaled.outcome);
        let kinds = |c: &resist_core::certifier::Certificate| c.checks.iter().map(|x| x.verdict).collect::<Vec<_>>();
        prop_assert_eq!(kinds(&base), kinds(&scaled));
    }

    #[test]
    fn separability_is_hereditary(combo in two_term_combo()) {
        let (_, _, gap) = combo.tightest_gap();
        let n = combo.n_qubits();
        for k in 2..gap.min(n) {
            prop_assert!(is_k_mixture(&combo, k));
            let here = dicke_separable(&reduce_combo(&combo, k).unwrap()).unwrap().kind;
            let below = dicke_separable(&reduce_combo(&combo, k - 1).unwrap()).unwrap().kind;
            if here == VerdictKind::Separable {
                prop_assert_eq!(below, VerdictKind::Separable, "k = {}", k);
            }
        }
    }

    #[test]
    fn hankel_separable_mixtures_are_ppt(coeffs in proptest::collection::vec(0i64..6, 3..=5)) {
        let mix = DickeMixture::new(coeffs.iter().map(|&c| integer(c)).collect()).unwrap();
        prop_assume!(coeffs.iter().any(|&c| c > 0));
        if dicke_separable(&mix).unwrap().kind == VerdictKind::Separable {
            let op = mix.to_operator().unwrap();
            prop_assert!(ppt_all_bipartitions(&op, &Limits::default()).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn code_outcomes_ignore_scaling(f in positive()) {
        let code = builtin_ca_10_7_3_3();
        let base: Vec<ExactScalar> = (1..=10).map(|i| rational(i, 7)).collect();
        let scaled: Vec<ExactScalar> = base.iter().map(|c| c * &f).collect();
        let a = certify_code_resistant(&code, &base, 2, CodeOptions::default()).unwrap();
        let b = certify_code_resistant(&code, &scaled, 2, CodeOptions::default()).unwrap();
        prop_assert_eq!(a.outcome, b.outcome);
    }
}

#[test]
fn certificates_are_byte_stable() {
    let combo = psi_n_minus_4(9, &integer(2), &integer(3)).unwrap();
    let a = emit_certificate(&certify_dicke_strong(&combo, 5).unwrap());
    let b = emit_certificate(&certify_dicke_strong(&combo, 5).unwrap());
    assert_eq!(a, b);

    let code = builtin_ca_10_7_3_3();
    let coeffs = vec![integer(1); 10];
    let serial = CodeOptions {
        strict: true,
        parallel: false,
    };
    let runs: Vec<String> = [CodeOptions::default(), serial, CodeOptions::default()]
        .into_iter()
        .map(|o| emit_certificate(&certify_code_resistant(&code, &coeffs, 2, o).unwrap()))
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn fragility_is_downward_closed_for_families() {
    for n in 7..=12 {
        for combo in [
            psi_n_minus_4(n, &integer(1), &integer(1)).unwrap(),
            psi_n_minus_3(n, &threshold_ratio_n3(n).unwrap(), &integer(1)).unwrap(),
        ] {
            let (_, _, gap) = combo.tightest_gap();
            for k in 2..gap.min(n) {
                let here = dicke_separable(&reduce_combo(&combo, k).unwrap()).unwrap().kind;
                let below = dicke_separable(&reduce_combo(&combo, k - 1).unwrap()).unwrap().kind;
                assert!(here != VerdictKind::Separable || below == VerdictKind::Separable);
            }
        }
    }
}
