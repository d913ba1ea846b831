use spiderweb::formats::{
    read_curve_csv, read_pgm, write_curve_csv, write_mean_csv, write_pgm, write_rings_csv, Report,
    Verdict, CONSTANTS,
};
use spiderweb::function_file::{presets, FunctionFile, Kind};
use spiderweb_core::curves::level_curve;
use spiderweb_core::dynamics::{detect_rings, Cell, Class, ClassGrid, EscapeParams, Window};
use spiderweb_core::modulus::log_max_modulus;
use spiderweb_core::subharmonic::mean_profile;
use spiderweb_core::{ClosedForm, Error};

#[test]
fn function_file_examples() {
    let text = r#"{"c": -2.0, "p0": 1,
        "family": {"kind": "explicit", "zeros": [{"a": 1.0, "p": 1}, {"a": 3.0, "p": 2}]}}"#;
    let spec = FunctionFile::parse(text).unwrap();
    assert_eq!(spec.family.kind, Kind::Explicit);
    let f = spec.build().unwrap();
    assert_eq!((f.c(), f.p0(), f.stored_zeros().len()), (-2.0, 1, 2));

    let text = r#"{"family": {"kind": "cosh_sqrt"},
        "truncation": {"max_log_radius": 6.0, "tol": 1e-10}}"#;
    let truncated = FunctionFile::parse(text).unwrap().build().unwrap();
    assert!(truncated.closed().is_none());
    assert!(!truncated.stored_zeros().is_empty());

    let f = FunctionFile::parse(r#"{"family": {"kind": "power", "q": 3}}"#)
        .unwrap()
        .build()
        .unwrap();
    assert_eq!(f.closed(), Some(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }));
}

#[test]
fn function_file_errors() {
    for text in [
        "",
        "[]",
        r#"{"family": {"kind": "power"}}"#,
        r#"{"family": {"kind": "cosh_sqrt"}, "extra": 1}"#,
        r#"{"family": {"kind": "explicit", "zeros": [{"a": -1.0, "p": 1}]}}"#,
        r#"{"family": {"kind": "explicit", "zeros": []}}"#,
        r#"{"c": 0.0, "family": {"kind": "cosh_sqrt"}}"#,
        r#"{"family": {"kind": "cosh_sqrt", "zeros": [{"a": 1.0, "p": 1}]}}"#,
    ] {
        let built = FunctionFile::parse(text).and_then(|s| s.build());
        assert!(
            matches!(built, Err(Error::InvalidFunction(_))),
            "{text}: {built:?}"
        );
    }
}

#[test]
fn presets_serialize_as_documented() {
    let names: Vec<_> = presets().into_iter().map(|(n, _)| n).collect();
    assert_eq!(
        names,
        ["cosh_sqrt", "sinh_sqrt_over_sqrt", "power_q2", "power_q3"]
    );
    let (_, q3) = &presets()[3];
    let v = serde_json::to_value(q3).unwrap();
    assert_eq!(v["family"]["kind"], "power");
    assert_eq!(v["family"]["q"], 3.0);
}

#[test]
fn level_curve_file_round_trip() {
    let f = FunctionFile::closed(ClosedForm::CoshSqrt).build().unwrap();
    let lm = log_max_modulus(&f, 10.0).unwrap();
    let curve = level_curve(&f, 10.0, 20.0, 0.5 * lm, 64).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    write_curve_csv(&curve, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_curve_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, curve);
    assert!(read_curve_csv("log_mod,arg\n1.0,0.5\n".as_bytes()).is_err());
    assert!(read_curve_csv("log_mod,arg\n1.0,x\n2.0,0.1\n".as_bytes()).is_err());
}

#[test]
fn mean_profile_csv() {
    let f = FunctionFile::closed(ClosedForm::CoshSqrt).build().unwrap();
    let p = mean_profile(&f, 0.0, 1.0, 3.0, 5).unwrap();
    let mut buf = Vec::new();
    write_mean_csv(&p, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("log_r,B,T,rTprime"));
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(0.0 <= v[2] && v[2] <= v[1] + 1e-9);
    }
}

fn band_grid() -> ClassGrid {
    let n = 33;
    let mut cells = Vec::new();
    for row in 0..n {
        for col in 0..n {
            let (x, y) = (col as f64 - 16.0, row as f64 - 16.0);
            let r = (x * x + y * y).sqrt();
            let class = if (8.0..11.0).contains(&r) {
                Class::QuiteFast
            } else if r > 14.0 {
                Class::Fast
            } else {
                Class::Low
            };
            cells.push(Cell { class, depth: 2 });
        }
    }
    ClassGrid {
        window: Window::square(33.0),
        width: n,
        height: n,
        cells,
    }
}

#[test]
fn pgm_gray_levels() {
    let mut grid = band_grid();
    grid.cells[0].class = Class::Undecided;
    let mut buf = Vec::new();
    write_pgm(&grid, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("P2\n33 33\n255\n"));
    assert!(text.lines().all(|l| l.len() <= 70));
    let (w, h, px) = read_pgm(&text).unwrap();
    assert_eq!((w, h), (33, 33));
    assert_eq!(px[0], 85);
    let center = 16 * 33 + 16;
    assert_eq!(px[center], 0);
    assert_eq!(px[16 * 33 + 16 + 9], 170);
    assert_eq!(px[33], 255);
    assert!(read_pgm("P5\n1 1\n255\n0").is_err());
    assert!(read_pgm("P2\n2 2\n255\n0 0 0").is_err());
}

#[test]
fn rings_csv_lists_rings_first() {
    let grid = band_grid();
    let analysis = detect_rings(&grid, &EscapeParams::new(0.5, 6.0, 2)).unwrap();
    let mut buf = Vec::new();
    write_rings_csv(&analysis, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("component_id,kind,cells,log_r_min,log_r_max,surrounds_origin,touches_boundary,annulus_ok,in_scope")
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[1], "ring");
    assert_eq!(first[5], "true");
    assert_eq!(
        text.lines().filter(|l| l.contains(",ring,")).count(),
        analysis.rings.len()
    );
}

#[test]
fn reports_embed_constants() {
    let r = Report {
        command: "verify theorem1".into(),
        function: Some(FunctionFile::closed(ClosedForm::CoshSqrt)),
        constants: CONSTANTS,
        params: serde_json::json!({"log_t": 20.0}),
        verdict: Verdict::Holds,
        result: serde_json::json!({}),
    };
    let mut buf = Vec::new();
    r.write(&mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert!((v["constants"]["t_quarter_min"].as_f64().unwrap() - 21.6076).abs() < 1e-4);
    assert!((v["constants"]["a_t_quarter_min"].as_f64().unwrap() - 172.861).abs() < 1e-3);
    assert!((v["constants"]["winding_constant"].as_f64().unwrap() - 0.145393).abs() < 1e-6);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["params"]["log_t"], 20.0);
}
