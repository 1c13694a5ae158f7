use tfreg::alon::build_alon;
use tfreg::graph::generators::cycle;
use tfreg::graph::io::{load, read_edge_list, save, to_edge_list_string, EdgeListError};
use tfreg::graph::Graph;

#[test]
fn empty_and_cycle_files() {
    assert_eq!(to_edge_list_string(&Graph::empty(5)), "5 0\n");
    assert_eq!(to_edge_list_string(&cycle(5)), "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n");
}

#[test]
fn alon_k4_rewrites_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _) = build_alon(4).unwrap();
    let (a, b) = (dir.path().join("a.el"), dir.path().join("b.el"));
    save(&g, &a).unwrap();
    let back = load(&a).unwrap();
    assert_eq!(back, g);
    save(&back, &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn save_replaces_existing_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.el");
    std::fs::write(&p, "garbage").unwrap();
    save(&cycle(4), &p).unwrap();
    assert_eq!(load(&p).unwrap(), cycle(4));
    // only the target remains: the temporary file was renamed over it
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn comments_are_skipped() {
    let g = read_edge_list("# made by hand\n3 1\n# edge follows\n0 2\n".as_bytes()).unwrap();
    assert_eq!(g.m(), 1);
    assert!(g.has_edge(0, 2));
}

fn parse_line(text: &str) -> usize {
    match read_edge_list(text.as_bytes()) {
        Err(EdgeListError::Parse { line, .. }) => line,
        other => panic!("expected a parse error for {text:?}, got {other:?}"),
    }
}

#[test]
fn non_canonical_input_is_rejected_with_line_numbers() {
    assert_eq!(parse_line("3 2\n0 2\n0 1\n"), 3); // out of order
    assert_eq!(parse_line("3 1\n1 0\n"), 2); // u > v
    assert_eq!(parse_line("3 1\n1 1\n"), 2); // loop
    assert_eq!(parse_line("3 1\n0 3\n"), 2); // out of range
    assert_eq!(parse_line("3 2\n0 1\n"), 3); // too few edges
    assert_eq!(parse_line("3 x\n"), 1);
    assert_eq!(parse_line("3 1\n0  1\n"), 2);
}
