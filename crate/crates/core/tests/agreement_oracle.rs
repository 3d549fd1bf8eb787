use lpattack_core::agreement::{agreement_report, cohen_kappa, AgreementConfig, SpanTally};
use lpattack_core::fixtures::{agreement_corpus, dual_cases, Template};

/// κ from a confusion matrix over category indices, in exact integer
/// arithmetic until the final division.
fn kappa_from_confusion(a: &[usize], b: &[usize], k: usize) -> f64 {
    let n = a.len() as i64;
    let mut m = vec![vec![0i64; k]; k];
    for (&x, &y) in a.iter().zip(b) {
        m[x][y] += 1;
    }
    let diag: i64 = (0..k).map(|i| m[i][i]).sum();
    let chance: i64 = (0..k)
        .map(|i| m[i].iter().sum::<i64>() * (0..k).map(|j| m[j][i]).sum::<i64>())
        .sum();
    (diag * n - chance) as f64 / (n * n - chance) as f64
}

/// Hand-assigned structural categories for the fixture. The Negate and
/// Contra templates share their IA premise (a causal promoting a bad
/// consequence); every other markable is distinct per template, and NA is its
/// own category.
const NA: usize = 0;

fn categories(t: Option<Template>) -> [usize; 3] {
    match t {
        None => [NA; 3],
        Some(Template::Value) => [1, 3, 6],
        Some(Template::Negate) => [2, 4, 7],
        Some(Template::Contra) => [2, 5, 8],
    }
}

#[test]
fn oracle_values_are_frozen() {
    let cases = dual_cases();
    let per_a: Vec<usize> = cases.iter().flat_map(|c| categories(c.a)).collect();
    let per_b: Vec<usize> = cases.iter().flat_map(|c| categories(c.b)).collect();
    let whole = |t: Option<Template>| match t {
        None => 0,
        Some(Template::Value) => 1,
        Some(Template::Negate) => 2,
        Some(Template::Contra) => 3,
    };
    let cat_a: Vec<usize> = cases.iter().map(|c| whole(c.a)).collect();
    let cat_b: Vec<usize> = cases.iter().map(|c| whole(c.b)).collect();

    // 24/30 observed, 111/900 chance; 8/10 observed, 32/100 chance
    assert!((kappa_from_confusion(&per_a, &per_b, 9) - 203.0 / 263.0).abs() < 1e-12);
    assert!((kappa_from_confusion(&cat_a, &cat_b, 4) - 12.0 / 17.0).abs() < 1e-12);
}

#[test]
fn synthetic_corpus_reproduces_hand_report() {
    let (_, a, b) = agreement_corpus();
    let report = agreement_report(&a, &b, &AgreementConfig::default()).unwrap();

    assert_eq!(report.n_debates, 10);
    assert!((report.coverage_a - 0.9).abs() < 1e-12);
    assert!((report.coverage_b - 0.9).abs() < 1e-12);
    assert!((report.kappa_per_markable - 203.0 / 263.0).abs() < 1e-9, "{}", report.kappa_per_markable);
    assert!((report.kappa_concatenated - 12.0 / 17.0).abs() < 1e-9, "{}", report.kappa_concatenated);
    assert_eq!(report.agreed_markables.count, 24);
    assert_eq!(report.agreed_debates.len(), 8);
    assert_eq!(
        report.span_match_per_markable,
        SpanTally {
            exact: 14,
            lenient: 1,
            mismatch: 1
        }
    );
    assert_eq!(
        report.span_match_concatenated,
        SpanTally {
            exact: 6,
            lenient: 1,
            mismatch: 1
        }
    );
}

#[test]
fn drop_aux_does_not_change_template_fixture() {
    // the templates' rationales are the sole support of their value
    // judgements, so the auxiliary rule has nothing to remove
    let (_, a, b) = agreement_corpus();
    let on = AgreementConfig {
        drop_aux_rationale: true,
        ..AgreementConfig::default()
    };
    let with = agreement_report(&a, &b, &on).unwrap();
    let without = agreement_report(&a, &b, &AgreementConfig::default()).unwrap();
    assert_eq!(with.kappa_per_markable, without.kappa_per_markable);
    assert_eq!(with.span_match_per_markable, without.span_match_per_markable);
}

#[test]
fn small_hand_fixtures() {
    let cases: [(&[&str], &[&str], f64); 6] = [
        (&["P", "P", "Q", "Q"], &["P", "Q", "Q", "Q"], 0.5),
        (&["P", "Q", "R"], &["P", "Q", "R"], 1.0),
        (&["P", "P"], &["Q", "Q"], 0.0),
        // p_o = 1/2, p_e = 1/2
        (&["P", "Q"], &["Q", "Q"], 0.0),
        // p_o = 0, p_e = 1/2
        (&["P", "Q"], &["Q", "P"], -1.0),
        // p_o = 4/6, p_e = (3*2 + 2*2 + 1*2)/36 = 1/3
        (&["P", "P", "P", "Q", "Q", "R"], &["P", "P", "Q", "Q", "R", "R"], 0.5),
    ];
    for (a, b, expected) in cases {
        let got = cohen_kappa(a, b).unwrap();
        assert!((got - expected).abs() < 1e-9, "{a:?} {b:?}: {got}");
    }
}
