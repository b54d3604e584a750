use alf_cli::{parse_rod_file, serialize_rod, CliError};
use alf_core::examples::{build, Example};

#[test]
fn taub_nut_from_minimal_file() {
    let rod = parse_rod_file(r#"{"A":2,"kinks":[{"z":0,"a":1}]}"#).unwrap();
    assert_eq!(rod, build(Example::TaubNut { n: 1.0 }).unwrap());
    assert_eq!(rod.angles, vec![1.0, 1.0]);
}

#[test]
fn angle_arity_is_checked() {
    let e = parse_rod_file(r#"{"A":2,"kinks":[{"z":0,"a":1}],"angles":[1]}"#).unwrap_err();
    assert!(matches!(&e, CliError::Input(m) if m.starts_with("angles:")), "{e}");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn errors_name_the_field() {
    let cases = [
        (r#"{"A":-1,"kinks":[{"z":0,"a":1}]}"#, "A:"),
        (r#"{"A":1,"kinks":[{"z":0,"a":0.5},{"z":-1,"a":0.5}]}"#, "kinks[1].z:"),
        (r#"{"A":1,"kinks":[{"z":0,"a":0.5},{"z":1,"a":0.25}]}"#, "kinks[*].a:"),
        (r#"{"A":1,"kinks":[{"z":0,"a":1}],"angles":[1,0]}"#, "angles[1]:"),
        (r#"{"A":1,"kinks":[]}"#, "kinks:"),
        (r#"{"format":"rod-v2","A":1,"kinks":[{"z":0,"a":1}]}"#, "format:"),
    ];
    for (text, prefix) in cases {
        let e = parse_rod_file(text).unwrap_err().to_string();
        assert!(e.starts_with(prefix), "{text}: {e}");
    }
    let e = parse_rod_file("{\n  \"A\": 1,\n  \"kinks\": [{\"z\": 0, \"b\": 1}]\n}").unwrap_err().to_string();
    assert!(e.contains("line 3"), "{e}");
}

#[test]
fn round_trip() {
    let rods = [
        build(Example::ChenTeo { p: 0.3 }).unwrap(),
        build(Example::KerrTaubBolt { a: 0.5, b: 1.0, m: 1.0, n: 0.5 }).unwrap(),
        build(Example::TaubBolt { positive: false }).unwrap(),
    ];
    for rod in rods {
        let text = serialize_rod(&rod);
        let back = parse_rod_file(&text).unwrap();
        assert_eq!(back, rod);
        assert_eq!(serialize_rod(&back), text);
    }
}
