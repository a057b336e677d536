use brac_core::bounds::{binary_from_standard, quantum_classical_gap};
use brac_core::exact::{parse_exact, to_f64};
use brac_core::pcrit::{emit_curves, t_lower, t_upper};
use brac_core::quantum::{protocol_statistics, simulate_binary_payoff_with};
use brac_core::strategy::{best_response_binary_decoding, evaluate_binary_strategy};
use brac_core::*;

fn cfg(d: usize, t: &str) -> PayoffConfig {
    PayoffConfig::from_decimal(d, t).unwrap()
}

#[test]
fn majority_strategy_attains_composition_bound() {
    for (d, n) in [(2, 2), (2, 5), (3, 3), (4, 2), (5, 2)] {
        let params = TaskParams::new(d, n).unwrap();
        let e = EncodingStrategy::majority(params).unwrap();
        let id = StandardDecoding::identity(params);
        let v = brac_core::strategy::evaluate_standard_strategy(&e, &id).unwrap();
        assert_eq!(
            v,
            standard_rac_classical_value(params, DEFAULT_COMPOSITION_CAP).unwrap()
        );

        let c = PayoffConfig::from_decimal(d, "2.5").unwrap();
        let dec = best_response_binary_decoding(&e, &c).unwrap();
        let b = evaluate_binary_strategy(&e, &dec, &c).unwrap();
        assert!(b >= binary_from_standard(&v, d, &c).unwrap());
    }
}

#[test]
fn bound_report_serializes_fraction_and_decimal() {
    let params = TaskParams::new(4, 2).unwrap();
    let r = bound_report(params, &cfg(4, "3"), DEFAULT_COMPOSITION_CAP).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["classical_binary"]["fraction"], "3/4");
    assert_eq!(v["classical_binary"]["decimal"], 0.75);
    assert_eq!(v["provenance"], "enumerated");
    let q = v["quantum_binary_n2"].as_f64().unwrap();
    assert!((q - 5.0 / 6.0).abs() < 1e-11);
}

#[test]
fn simulated_statistics_certify_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg(3, "2");
    let stats = protocol_statistics(3, StateConvention::PhaseAligned).unwrap();
    let table = StatisticsTable::from_protocol(&stats, &c).unwrap();
    for (name, fmt) in [
        ("q.json", StatisticsFormat::Json),
        ("q.csv", StatisticsFormat::Csv),
    ] {
        let path = dir.path().join(name);
        table.write(&path, fmt).unwrap();
        assert_eq!(StatisticsFormat::from_path(&path), fmt);
        let back = StatisticsTable::load(&path, fmt, Some("2")).unwrap();
        let r = certify_dimension(&back, 3).unwrap();
        assert!(r.is_certified(), "{name}");
        assert!((r.observed - simulate_binary_payoff(3, &c).unwrap()).abs() < 1e-9);
        assert!((r.margin - quantum_classical_gap(&c)).abs() < 1e-9);
    }
}

#[test]
fn csv_without_t_yes_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    std::fs::write(
        &path,
        "a0,y,k,p0,p1\n0,0,0,1,0\n0,0,1,0,1\n1,0,0,0,1\n1,0,1,1,0\n",
    )
    .unwrap();
    assert!(matches!(
        StatisticsTable::load(&path, StatisticsFormat::Csv, None),
        Err(Error::Schema(_))
    ));
}

#[test]
fn literal_state_differs_from_aligned() {
    // The unaligned state loses the constant cross term, so its payoff drifts.
    for d in [3, 5, 8] {
        let c = cfg(d, "2");
        let aligned = simulate_binary_payoff(d, &c).unwrap();
        let literal = simulate_binary_payoff_with(d, &c, StateConvention::Unaligned).unwrap();
        assert!((aligned - binary_quantum_n2(&c)).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&literal));
        assert!((aligned - literal).abs() > 1e-6, "d={d}");
    }
}

#[test]
fn curves_cover_every_range() {
    let (d, pc) = (8, 0.18495);
    let table = emit_curves(d, pc, &[1, 2, 3, 4], 400).unwrap();
    let t0 = t_lower(d, pc);
    for (col, &x) in table.xs.iter().enumerate() {
        let t1 = t_upper(d, pc, x).unwrap();
        let inside: Vec<_> = table
            .points
            .iter()
            .filter(|p| p.t >= t0 && p.t <= t1)
            .collect();
        assert!(inside.len() > 10);
        assert!(inside.iter().all(|p| p.entropies[col].is_some()), "x={x}");
        assert!(table
            .points
            .iter()
            .filter(|p| p.t > t1)
            .all(|p| p.entropies[col].is_none()));
    }
}

#[test]
fn exact_t_yes_survives_the_bound_path() {
    let c = PayoffConfig::from_decimal(3, "1.99940").unwrap();
    assert_eq!(c.t_yes(), &parse_exact("19994/10000").unwrap());
    let v = binary_classical_n2(&c);
    assert!((to_f64(&v) - 0.75).abs() < 1e-3);
}
