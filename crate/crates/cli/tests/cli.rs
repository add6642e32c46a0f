use std::process::Command;

use proptest::prelude::*;

use farey_dim_cli::{
    dispatch, parse_json, serialize, Format, Metadata, Payload, Report, Scalar, Value,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_farey-dim"))
}

fn run(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn partition_level_two() {
    let (code, out, _) = run(&["partition", "--level", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "left,right,length,determinant");
    assert_eq!(lines[1], "0/1,1/3,1/3,1");
    assert_eq!(lines[4], "2/3,1/1,1/3,1");
}

#[test]
fn fb_dim_json() {
    let (code, out, _) = run(&["fb-dim", "--jmax", "64", "--format", "json"]);
    assert_eq!(code, 0);
    let r = parse_json(&out).unwrap();
    assert_eq!(r.metadata.command, "fb-dim");
    let s = r.scalar("dimension").unwrap();
    let Value::Real(d) = s.value else { panic!() };
    assert!((d - 0.870389623387313).abs() < 1e-12);
    assert!(s.certificate.unwrap() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fb-dim", "--jmax", "8"]).0, 2);
    assert_eq!(run(&["partition", "--level", "0"]).0, 2);
    assert_eq!(run(&["partition", "--level", "25"]).0, 2);
    assert_eq!(run(&["spectrum", "--weights", "0.5,0.6"]).0, 2);
    assert_eq!(run(&["cutseq", "--cf", "1,1"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["partition", "--bogus", "3"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, out, err) = run(&["ek-dim", "--k", "0"]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && !err.is_empty());
}

#[test]
fn runs_are_byte_identical() {
    for args in [
        &["spectrum", "--format", "csv"][..],
        &["spectrum", "--family", "duality", "--format", "json"],
        &["ek-dim", "--format", "json"],
        &["census", "--level", "10"],
        &["cutseq", "--period", "1,2", "--prefix", "3"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.0, 0, "{args:?}: {}", a.2);
        assert_eq!(a.1, b.1, "{args:?}");
    }
}

#[test]
fn scalar_report_is_one_csv_row() {
    let (r, _) = dispatch(["farey-dim", "fb-dim"]).unwrap();
    let text = String::from_utf8(serialize(&r, Format::Csv)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("dimension,dimension_certificate,"));
    assert!(lines[1].starts_with("8.7038962338731"));
}

#[test]
fn spectrum_columns() {
    let (r, _) = dispatch([
        "farey-dim",
        "spectrum",
        "--lo",
        "0.5",
        "--hi",
        "1",
        "--step",
        "0.25",
    ])
    .unwrap();
    let Payload::Table { columns, rows } = &r.payload else {
        panic!()
    };
    assert_eq!(columns[..4], ["param", "alpha", "f", "tau"]);
    let params: Vec<_> = rows.iter().map(|r| r[0].clone()).collect();
    assert_eq!(
        params,
        vec![Value::Real(0.5), Value::Real(0.75), Value::Real(1.0)]
    );
}

#[test]
fn census_reports_the_top_discrepancy() {
    let (r, _) = dispatch(["farey-dim", "census", "--level", "6"]).unwrap();
    let Payload::Table { rows, .. } = &r.payload else {
        panic!()
    };
    for row in rows {
        let top = row[2] == row[0];
        let want = if top { "-1/4" } else { "0/1" };
        assert_eq!(row[5], Value::Text(want.into()), "{row:?}");
    }
}

#[test]
fn cutseq_blocks_match() {
    let (r, _) = dispatch(["farey-dim", "cutseq", "--cf", "2,1,3"]).unwrap();
    assert_eq!(
        r.scalar("word").unwrap().value,
        Value::Text("TTFTTT$".into())
    );
    assert_eq!(
        r.scalar("blocks_match_quotients").unwrap().value,
        Value::Bool(true)
    );
}

fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<bool>().prop_map(Value::Bool),
        any::<i64>().prop_map(Value::Int),
        (-1e300f64..1e300).prop_map(Value::Real),
        "[a-z0-9/ ,\"]{0,12}".prop_map(Value::Text),
    ]
}

fn report() -> impl Strategy<Value = Report> {
    let scalars = prop::collection::vec(
        ("[a-z_]{1,8}", value(), prop::option::of(0.0f64..1.0)).prop_map(
            |(name, value, certificate)| Scalar {
                name,
                value,
                certificate,
            },
        ),
        0..5,
    )
    .prop_map(Payload::Scalars);
    let table = (1usize..4)
        .prop_flat_map(|w| {
            (
                prop::collection::vec("[a-z]{1,6}", w),
                prop::collection::vec(prop::collection::vec(value(), w), 0..5),
            )
        })
        .prop_map(|(columns, rows)| Payload::Table { columns, rows });
    (
        "[a-z-]{1,10}",
        prop::collection::btree_map("[a-z_]{1,6}", value(), 0..4),
        prop_oneof![scalars, table],
    )
        .prop_map(|(command, parameters, payload)| Report {
            metadata: Metadata {
                command,
                version: "0.1.0".into(),
                parameters,
            },
            payload,
        })
}

proptest! {
    #[test]
    fn json_round_trip(r in report()) {
        let bytes = serialize(&r, Format::Json);
        prop_assert_eq!(parse_json(&bytes).unwrap(), r.clone());
        prop_assert_eq!(serialize(&r, Format::Json), bytes);
    }
}
