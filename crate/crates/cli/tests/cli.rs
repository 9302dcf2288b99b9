use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use metasrl::xml::{catalogue_from_xml, from_xml};
use metasrl::{Node, RoleLabel};

fn metasrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metasrl")).args(args).output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lang_sets_default_language() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.conll");
    fs::write(&input, "1\tpiove\tpiovere\tVERB\t_\t_\t0\troot\tB-Cause\n").unwrap();
    let out = metasrl(&["convert", "--from", "conll", "--lang", "it", arg(&input)]);
    assert!(out.status.success());
    let g = from_xml(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let doc = g.concepts_named("LanguageDoc").next().unwrap();
    let lang = g.role_target(doc, &RoleLabel::new("language")).unwrap();
    assert!(matches!(g.node(lang), Some(Node::Entity { value, .. }) if value == "it"));
}

#[test]
fn dumped_catalogue_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("causation.xml");
    assert!(metasrl(&["catalogue", "dump", "causation", "-o", arg(&file)]).status.success());
    let cat = catalogue_from_xml(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(cat.len(), 3);

    let out = metasrl(&["catalogue", "list", arg(&file)]);
    assert!(out.status.success());
    let listing = String::from_utf8(out.stdout).unwrap();
    assert_eq!(listing.lines().count(), 3);
}

#[test]
fn unknown_bundled_catalogue() {
    let out = metasrl(&["catalogue", "dump", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn split_output_is_numbered() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("two.amr");
    fs::write(&input, "(a / alpha)\n\n(b / beta :mod (c / gamma))\n").unwrap();
    let out = dir.path().join("g.dot");
    let status = metasrl(&["convert", "--from", "amr", "--to", "dot", "--combine=false", arg(&input), "-o", arg(&out)]);
    assert!(status.status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("g-"))
        .collect();
    names.sort();
    assert_eq!(names, ["g-01.dot", "g-02.dot"]);
}

#[test]
fn output_ends_with_newline() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.amr");
    fs::write(&input, "(a / alpha)").unwrap();
    let out = metasrl(&["convert", "--from", "amr", arg(&input)]);
    assert!(out.stdout.ends_with(b"</semanticgraph>\n"));
}
