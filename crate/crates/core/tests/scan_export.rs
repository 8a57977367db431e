use proptest::prelude::*;
use trapdet::export::*;
use trapdet::scan::*;
use trapdet::solver::{find_roots, solve_state, Parity, RootOptions, SystemSpec};
use trapdet::Error;

fn small_scan() -> ScanSpec {
    let mut s = ScanSpec::new(SweepVar::Separation2d, 3.0, 5.0, 9);
    s.e_max = 3.0;
    s.free_branches = true;
    s.unaffected = true;
    s
}

#[test]
fn scan_rows_are_sorted_and_labelled() {
    let s = small_scan();
    let t = run_scan(&s, &RootOptions::default()).unwrap();
    assert_eq!(t.sweep, Some(SweepVar::Separation2d));
    assert_eq!(t.values(), s.values());
    assert!(t.rows.iter().any(|r| r.flags.free && r.level_index == -1));
    assert!(t.rows.iter().any(|r| r.flags.unaffected && r.level_index == -1));
    assert!(t.rows.iter().all(|r| !r.flags.error && !r.flags.jump));
    for v in t.values() {
        let direct = s.spectrum_at(v, &RootOptions::default()).unwrap();
        let even0 = t.track(Parity::Even, 0).into_iter().find(|x| x.0 == v).unwrap().1;
        assert_eq!(even0, direct.of_parity(Parity::Even)[0]);
    }
}

#[test]
fn scan_validation() {
    let mut s = small_scan();
    s.steps = 0;
    assert!(matches!(run_scan(&s, &RootOptions::default()), Err(Error::Config(_))));
    let mut s = small_scan();
    s.e_min = 4.0;
    assert!(matches!(run_scan(&s, &RootOptions::default()), Err(Error::Config(_))));
    assert!("separation_2d".parse::<SweepVar>().is_ok());
    assert!("distance".parse::<SweepVar>().is_err());
}

#[test]
fn failed_point_is_flagged_not_fatal() {
    // 2d sweeps through the minimum separation
    let mut s = ScanSpec::new(SweepVar::Separation2d, 0.0, 1.0, 3);
    s.e_max = 2.0;
    let t = run_scan(&s, &RootOptions::default()).unwrap();
    let bad: Vec<_> = t.rows.iter().filter(|r| r.flags.error).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].value, 0.0);
    assert!(bad[0].energy.is_nan());
}

#[test]
fn crossings_pair_same_parity_only() {
    let mut s = ScanSpec::new(SweepVar::Separation2d, 4.0, 8.0, 41);
    s.e_max = 3.0;
    let opts = RootOptions::default();
    let t = run_scan(&s, &opts).unwrap();
    let found = detect_crossings(&t, &s, &opts, &CrossingOptions::default()).unwrap();
    assert!(!found.is_empty());
    for c in &found {
        assert_eq!(c.upper, c.lower + 1);
        assert_ne!(c.parity, Parity::None);
        let sp = s.spectrum_at(c.value, &opts).unwrap();
        let lower = sp.roots.iter().find(|r| r.parity == c.parity && r.index == c.lower).unwrap();
        assert_eq!(lower.energy, c.lower_energy);
        assert!((c.upper_energy - c.lower_energy - c.gap).abs() < 1e-15);
    }
}

#[test]
fn cuts() {
    let spec = SystemSpec::symmetric_pair(1.5, 0.4).unwrap();
    let r = find_roots(&spec, -5.0, 3.0, &RootOptions::default()).unwrap().roots[0];
    let st = solve_state(&spec, r.energy, r.parity).unwrap();
    let axis = wavefunction_cut(&st, &spec, CutGeometry::ZAxis { steps: 5 }, -3.0, 3.0, Rendering::PoleTamed).unwrap();
    assert_eq!(axis.len(), 5);
    assert!(axis.iter().all(|p| p.value.is_finite()));
    // z = ±1.5 sit on the impurities; the tamed value joins its neighbours
    let near = wavefunction_cut(&st, &spec, CutGeometry::ZAxis { steps: 2 }, 1.5 - 1e-5, 1.5 + 1e-5, Rendering::PoleTamed)
        .unwrap();
    let on = axis.iter().find(|p| p.z == 1.5).unwrap().value;
    assert!((near[0].value - on).abs() < 1e-3 * on.abs());
    assert!(matches!(
        wavefunction_cut(&st, &spec, CutGeometry::ZAxis { steps: 5 }, -3.0, 3.0, Rendering::Raw),
        Err(Error::Domain(_))
    ));
    let plane = wavefunction_cut(&st, &spec, CutGeometry::XzPlane { steps: 4 }, -2.0, 2.0, Rendering::Raw).unwrap();
    assert_eq!(plane.len(), 16);
}

#[test]
fn float_format() {
    assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
    assert_eq!(fmt_f64(-2.5), "-2.5000000000000000e0");
    assert_eq!(fmt_f64(f64::NAN), "NaN");
    assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
}

#[test]
fn empty_table_is_header_only() {
    let t = ScanTable { sweep: Some(SweepVar::AsymDz), rows: vec![] };
    assert_eq!(table_to_csv(&t), format!("{TABLE_HEADER}\n"));
    let back = table_from_csv(&table_to_csv(&t)).unwrap();
    assert!(back.rows.is_empty());
    let json: serde_json::Value = serde_json::from_str(&table_to_json(&t).unwrap()).unwrap();
    assert_eq!(json["version"], SCHEMA_VERSION);
    assert_eq!(json["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn bad_input_is_a_parse_error() {
    assert!(matches!(table_from_csv("value,energy\n1,2\n"), Err(Error::Parse(_))));
    let row = format!("{TABLE_HEADER}\nseparation_2d,1.0,0,abc,even,\n");
    assert!(matches!(table_from_csv(&row), Err(Error::Parse(_))));
    let flag = format!("{TABLE_HEADER}\nseparation_2d,1.0,0,2.0,even,wobbly\n");
    assert!(matches!(table_from_csv(&flag), Err(Error::Parse(_))));
    assert!(matches!(table_from_json("{\"rows\": 3}"), Err(Error::Parse(_))));
}

#[test]
fn exports_are_deterministic() {
    let s = small_scan();
    let a = run_scan(&s, &RootOptions::default()).unwrap();
    let b = run_scan(&s, &RootOptions::default()).unwrap();
    assert_eq!(table_to_csv(&a), table_to_csv(&b));
    assert_eq!(table_to_json(&a).unwrap(), table_to_json(&b).unwrap());
    assert_eq!(table_from_csv(&table_to_csv(&a)).unwrap(), a);
}

#[test]
fn crossing_and_cut_schemas() {
    let rec = CrossingRecord {
        value: 6.07,
        gap: 0.047,
        lower: 0,
        upper: 1,
        parity: Parity::Even,
        lower_energy: 1.3,
        upper_energy: 1.347,
    };
    let csv = crossings_to_csv(SweepVar::Separation2d, &[rec]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CROSSING_HEADER));
    assert!(lines.next().unwrap().starts_with("separation_2d,6.0700000000000003e0,"));
    let json: serde_json::Value = serde_json::from_str(&crossings_to_json(SweepVar::Separation2d, &[rec]).unwrap()).unwrap();
    assert_eq!(json["version"], SCHEMA_VERSION);
    let cut = cut_to_csv(&[CutSample { x: 0.0, z: 1.0, value: -0.5 }]);
    assert_eq!(cut.lines().next(), Some(CUT_HEADER));
}

fn flags() -> impl Strategy<Value = LevelFlags> {
    prop::array::uniform7(any::<bool>()).prop_map(|b| LevelFlags {
        degenerate: b[0],
        near_pole: b[1],
        unaffected: b[2],
        free: b[3],
        jump: b[4],
        error: b[5],
        variational: b[6],
    })
}

fn row() -> impl Strategy<Value = ScanRow> {
    let energy = prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), Just(f64::NAN)];
    let parity = prop_oneof![Just(Parity::Even), Just(Parity::Odd), Just(Parity::None)];
    (any::<f64>().prop_filter("finite", |x| x.is_finite()), -1i64..50, energy, parity, flags())
        .prop_map(|(value, level_index, energy, parity, flags)| ScanRow { value, level_index, energy, parity, flags })
}

// a header-only CSV has nowhere to carry the sweep variable
fn same(a: &ScanTable, b: &ScanTable) -> bool {
    (a.sweep == b.sweep || a.rows.is_empty())
        && a.rows.len() == b.rows.len()
        && a.rows.iter().zip(&b.rows).all(|(x, y)| {
            x.value.to_bits() == y.value.to_bits()
                && x.level_index == y.level_index
                && (x.energy.to_bits() == y.energy.to_bits() || (x.energy.is_nan() && y.energy.is_nan()))
                && x.parity == y.parity
                && x.flags == y.flags
        })
}

proptest! {
    #[test]
    fn round_trips_are_bit_exact(rows in prop::collection::vec(row(), 0..20)) {
        let t = ScanTable { sweep: Some(SweepVar::ScatteringA), rows };
        let csv = table_to_csv(&t);
        prop_assert!(same(&table_from_csv(&csv).unwrap(), &t));
        prop_assert_eq!(table_to_csv(&table_from_csv(&csv).unwrap()), csv);
        let json = table_to_json(&t).unwrap();
        prop_assert!(same(&table_from_json(&json).unwrap(), &t));
        prop_assert_eq!(table_to_json(&table_from_json(&json).unwrap()).unwrap(), json);
    }

    #[test]
    fn flags_round_trip(f in flags()) {
        prop_assert_eq!(LevelFlags::parse(&f.render()).unwrap(), f);
    }
}
