use std::path::Path;

use oddflip::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["oddflip"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn setup(dir: &Path) {
    let write = |name: &str, text: &str| std::fs::write(dir.join(name), text).unwrap();
    write("c5.graph", "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n");
    write("iso1.matching", "p matching 5\ni 1\nm 2 3\nm 4 5\n");
    write("iso3.matching", "p matching 5\ni 3\nm 1 2\nm 4 5\n");
    write("split.graph", "p edge 5 4\ne 1 3\ne 1 4\ne 2 3\ne 2 4\n");
    write("a.matching", "p matching 5\ni 5\nm 1 3\nm 2 4\n");
    write("b.matching", "p matching 5\ni 5\nm 1 4\nm 2 3\n");
    write("even.graph", "p edge 4 3\ne 1 2\ne 2 3\ne 3 4\n");
    write("sc.txt", "p setcover 1 1\ns 1 0\n");
    write("fe.qdimacs", "p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n");
}

#[test]
fn c5_commands() {
    let tmp = tempfile::tempdir().unwrap();
    setup(tmp.path());
    let p = |n: &str| tmp.path().join(n).to_string_lossy().into_owned();
    assert_eq!(call(&["distance", &p("c5.graph"), &p("iso1.matching"), &p("iso3.matching")]), (0, "distance 1\nf 2\n".into(), String::new()));
    assert_eq!(call(&["diameter", &p("c5.graph")]).1, "diameter 2\n");
    assert_eq!(call(&["radius", &p("c5.graph")]).1, "radius 2\n");
    assert!(call(&["center", &p("c5.graph")]).1.starts_with("radius 2\ncenters 5\n"));
    assert_eq!(call(&["enumerate", &p("c5.graph"), "--count"]).1, "count 5\n");
    let (code, out, _) = call(&["connected", &p("c5.graph")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("connected yes\n"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    setup(tmp.path());
    let p = |n: &str| tmp.path().join(n).to_string_lossy().into_owned();
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(call(&["diameter", &p("missing.graph")]).0, 1);
    assert_eq!(call(&["diameter", &p("even.graph")]).0, 2);
    // disconnected flip graph
    assert_eq!(call(&["diameter", &p("split.graph")]).0, 2);
    let (code, out, _) = call(&["distance", &p("split.graph"), &p("a.matching"), &p("b.matching")]);
    assert_eq!((code, out.as_str()), (2, "unreachable\n"));
    assert_eq!(call(&["diameter", &p("c5.graph"), "--cap", "2"]).0, 2);
    let (code, out, _) = call(&["connected", &p("split.graph")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("connected no 1 3\n"));
    assert_eq!(call(&["verify", "--suite", "arithmetic"]).0, 0);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn reduce_and_recover_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    setup(tmp.path());
    let p = |n: &str| tmp.path().join(n).to_string_lossy().into_owned();
    let (code, meta, _) = call(&["reduce", "setcover", &p("sc.txt"), "--out", &p("red")]);
    assert_eq!(code, 0);
    assert!(meta.contains("path_len 8\n"));
    for f in ["graph.txt", "min.matching", "mtar.matching", "roles.txt", "meta.txt"] {
        assert!(tmp.path().join("red").join(f).exists(), "{f}");
    }
    let (_, seq, _) = call(&["distance", &p("red/graph.txt"), &p("red/min.matching"), &p("red/mtar.matching")]);
    assert!(seq.starts_with("distance 11\n"));
    std::fs::write(tmp.path().join("seq"), &seq).unwrap();
    let (code, out, _) = call(&["recover", &p("red"), &p("seq")]);
    assert_eq!((code, out.as_str()), (0, "length 11\ncover 1\nsize 1\nsize_bound 1\n"));

    let (code, _, err) = call(&["reduce", "diameter", &p("fe.qdimacs"), "--out", &p("d"), "--assignment", "101"]);
    assert_eq!(code, 1, "{err}");
    let (code, meta, _) = call(&["reduce", "diameter", &p("fe.qdimacs"), "--out", &p("d"), "--ell", "4"]);
    assert_eq!(code, 0);
    assert!(meta.contains("threshold 21\n"));
    let (code, _, _) = call(&["reduce", "diameter", &p("fe.qdimacs"), "--out", &p("d"), "--mode", "closed-form"]);
    assert_eq!(code, 1);
}
