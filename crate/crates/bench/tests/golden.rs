//! Golden-file checks: the CSV renderers and the aggregation must keep
//! producing bit-identical output for a fixed record stream. The fixture
//! values are chosen so every mean and sample deviation is exact in
//! floating point.

use epipolar_bench::csv_io::{
    parse_aggregate, parse_measurements, parse_success, render_aggregate, render_measurements,
    render_success,
};
use epipolar_bench::{
    aggregate_criteria, aggregate_success, MeasurementRecord, SuccessRateRecord, Variant,
};

fn fixture_measurements() -> Vec<MeasurementRecord> {
    let base = |rep, ds, d1, te_ns, t1_ns, tk_ns, ik| MeasurementRecord {
        re_level: 1.0,
        rep,
        re_sq: 1.0,
        sed_sq: 2.5,
        re1_sq: 1.25,
        rek_sq: 1.125,
        ds,
        d1,
        dk: 0.0,
        te_ns,
        ts_ns: 5,
        t1_ns,
        tk_ns,
        ik,
    };
    vec![
        base(0, 1.0, -1.0, 10, 1, 2, 1),
        base(1, 2.0, 0.0, 20, 2, 4, 2),
        base(2, 3.0, 1.0, 30, 3, 6, 3),
        MeasurementRecord {
            re_level: 100.0,
            rep: 0,
            re_sq: 4.0,
            sed_sq: 7.5,
            re1_sq: 0.25,
            rek_sq: 4.0,
            ds: 7.5,
            d1: -0.5,
            dk: 0.25,
            te_ns: 1000,
            ts_ns: 9,
            t1_ns: 11,
            tk_ns: 40,
            ik: 4,
        },
    ]
}

const MEASUREMENTS_GOLDEN: &str = r"re_level,rep,re_sq,sed_sq,re1_sq,rek_sq,ds,d1,dk,te_ns,ts_ns,t1_ns,tk_ns,ik
1.0000000000000000e0,0,1.0000000000000000e0,2.5000000000000000e0,1.2500000000000000e0,1.1250000000000000e0,1.0000000000000000e0,-1.0000000000000000e0,0.0000000000000000e0,10,5,1,2,1
1.0000000000000000e0,1,1.0000000000000000e0,2.5000000000000000e0,1.2500000000000000e0,1.1250000000000000e0,2.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,20,5,2,4,2
1.0000000000000000e0,2,1.0000000000000000e0,2.5000000000000000e0,1.2500000000000000e0,1.1250000000000000e0,3.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,30,5,3,6,3
1.0000000000000000e2,0,4.0000000000000000e0,7.5000000000000000e0,2.5000000000000000e-1,4.0000000000000000e0,7.5000000000000000e0,-5.0000000000000000e-1,2.5000000000000000e-1,1000,9,11,40,4
";

const CRITERIA_AGGREGATE_GOLDEN: &str = r"re_level,key,mean,std,n
1.0000000000000000e0,d1,0.0000000000000000e0,1.0000000000000000e0,3
1.0000000000000000e0,dk,0.0000000000000000e0,0.0000000000000000e0,3
1.0000000000000000e0,ds,2.0000000000000000e0,1.0000000000000000e0,3
1.0000000000000000e0,ik,2.0000000000000000e0,1.0000000000000000e0,3
1.0000000000000000e0,t1_ns,2.0000000000000000e0,1.0000000000000000e0,3
1.0000000000000000e0,te_ns,2.0000000000000000e1,1.0000000000000000e1,3
1.0000000000000000e0,tk_ns,4.0000000000000000e0,2.0000000000000000e0,3
1.0000000000000000e0,ts_ns,5.0000000000000000e0,0.0000000000000000e0,3
1.0000000000000000e2,d1,-5.0000000000000000e-1,0.0000000000000000e0,1
1.0000000000000000e2,dk,2.5000000000000000e-1,0.0000000000000000e0,1
1.0000000000000000e2,ds,7.5000000000000000e0,0.0000000000000000e0,1
1.0000000000000000e2,ik,4.0000000000000000e0,0.0000000000000000e0,1
1.0000000000000000e2,t1_ns,1.1000000000000000e1,0.0000000000000000e0,1
1.0000000000000000e2,te_ns,1.0000000000000000e3,0.0000000000000000e0,1
1.0000000000000000e2,tk_ns,4.0000000000000000e1,0.0000000000000000e0,1
1.0000000000000000e2,ts_ns,9.0000000000000000e0,0.0000000000000000e0,1
";

fn fixture_success() -> Vec<SuccessRateRecord> {
    vec![
        SuccessRateRecord {
            re_level: 1.0,
            variant: Variant::Gp,
            rep: 0,
            trials: 1,
            succeeded: true,
        },
        SuccessRateRecord {
            re_level: 1.0,
            variant: Variant::Gp,
            rep: 1,
            trials: 3,
            succeeded: true,
        },
        SuccessRateRecord {
            re_level: 1.0,
            variant: Variant::Parametric,
            rep: 0,
            trials: 1,
            succeeded: true,
        },
    ]
}

const SUCCESS_GOLDEN: &str = r"re_level,variant,rep,trials,succeeded
1.0000000000000000e0,gp,0,1,true
1.0000000000000000e0,gp,1,3,true
1.0000000000000000e0,parametric,0,1,true
";

const SUCCESS_AGGREGATE_GOLDEN: &str = r"re_level,key,mean,std,n
1.0000000000000000e0,success_gp,1.0000000000000000e0,0.0000000000000000e0,2
1.0000000000000000e0,success_parametric,1.0000000000000000e0,0.0000000000000000e0,1
1.0000000000000000e0,trials_gp,2.0000000000000000e0,1.4142135623730951e0,2
1.0000000000000000e0,trials_parametric,1.0000000000000000e0,0.0000000000000000e0,1
";

#[test]
fn measurement_rendering_matches_the_golden_bytes() {
    assert_eq!(render_measurements(&fixture_measurements()), MEASUREMENTS_GOLDEN);
}

#[test]
fn measurement_golden_parses_back_to_the_fixture() {
    assert_eq!(
        parse_measurements(MEASUREMENTS_GOLDEN).unwrap(),
        fixture_measurements()
    );
}

#[test]
fn criteria_aggregation_matches_the_golden_bytes() {
    let rows = aggregate_criteria(&fixture_measurements()).unwrap();
    assert_eq!(render_aggregate(&rows), CRITERIA_AGGREGATE_GOLDEN);
    assert_eq!(parse_aggregate(CRITERIA_AGGREGATE_GOLDEN).unwrap(), rows);
}

#[test]
fn success_rendering_and_aggregation_match_the_golden_bytes() {
    assert_eq!(render_success(&fixture_success()), SUCCESS_GOLDEN);
    assert_eq!(parse_success(SUCCESS_GOLDEN).unwrap(), fixture_success());
    let rows = aggregate_success(&fixture_success()).unwrap();
    assert_eq!(render_aggregate(&rows), SUCCESS_AGGREGATE_GOLDEN);
}
