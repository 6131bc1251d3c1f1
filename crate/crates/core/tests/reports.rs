use cayleytones::counterpoint::{enumerate_weak_witnesses, extend_to_partitions, strong_search};
use cayleytones::system::interval_table;
use cayleytones::{CayleyGraph, Dichotomy, Error, GeneratorSet, KPrime, ModRing, MusicalSystem, Quality};
use serde_json::json;

fn z12() -> (KPrime, CayleyGraph) {
    let s = GeneratorSet::new(ModRing::new(12).unwrap(), [3, 4, 8, 9]).unwrap();
    (KPrime::new(s.clone()).unwrap(), CayleyGraph::unoriented(s).unwrap())
}

#[test]
fn strong_report_json() {
    let (_, g) = z12();
    let v = serde_json::to_value(strong_search(&Dichotomy::fux(), &g).unwrap()).unwrap();
    assert_eq!(v["n"], 12);
    assert_eq!(v["examined"], 48);
    assert_eq!(v["witnesses"], json!([{"h": 5, "w": 2}]));
    assert_eq!(v["partitions"][0]["D"], json!([1, 2, 5, 6, 10, 11]));
}

#[test]
fn weak_report_lists_sumset() {
    let (k, _) = z12();
    let r = enumerate_weak_witnesses(&k);
    assert!(r.notes.iter().any(|n| n == "K'+K' = {0,1,3,4,5,6,7,8,9,11}"));
    assert!(r.witnesses.iter().any(|m| m.h == 11 && m.w == 2));
    assert!(r.notes.iter().any(|n| n.contains("11x+2") && n.contains("fixed points {1,7}")));
}

#[test]
fn sorted_reports_are_stable() {
    let (k, g) = z12();
    let mut a = extend_to_partitions(&k, &g).unwrap();
    let b = a.clone();
    a.sort();
    let mut c = b.clone();
    c.partitions.reverse();
    c.witnesses.reverse();
    c.sort();
    assert_eq!(a, c);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
}

#[test]
fn system_validation_errors() {
    assert!(matches!(MusicalSystem::from_factors(4, 2, 2.0, 440.0), Err(Error::NotCoprime { .. })));
    assert!(matches!(MusicalSystem::from_factors(1, 12, 2.0, 440.0), Err(Error::TrivialFactor { .. })));
    assert!(matches!(MusicalSystem::from_factors(4, 3, 1.0, 440.0), Err(Error::InvalidOctaveRatio(_))));
    assert!(matches!(MusicalSystem::from_factors(4, 3, 2.0, 0.0), Err(Error::InvalidBaseFrequency(_))));
    assert!(matches!(MusicalSystem::validate(13, 4, 3, 2.0, 440.0), Err(Error::FactorMismatch { .. })));
    let swapped = MusicalSystem::from_factors(3, 4, 2.0, 440.0).unwrap();
    assert_eq!((swapped.p(), swapped.q()), (4, 3));
    assert!(swapped.was_swapped());
}

#[test]
fn system_json() {
    let v = serde_json::to_value(MusicalSystem::western()).unwrap();
    assert_eq!(v, json!({"n": 12, "p": 4, "q": 3, "s": 2.0, "f0": 440.0}));
    let scale = serde_json::to_value(MusicalSystem::western().scale(0, Quality::Major)).unwrap();
    assert_eq!(scale["notes"], json!([0, 2, 4, 5, 7, 9, 11, 0]));
    assert_eq!(scale["steps"], json!([2, 2, 1, 2, 2, 2, 1]));
}

#[test]
fn dot_export_shapes() {
    let sys = MusicalSystem::from_factors(5, 2, 2.0, 440.0).unwrap();
    let oriented = sys.oriented_graph().unwrap().export_dot();
    assert!(oriented.starts_with("digraph"));
    assert_eq!(oriented.matches("->").count(), 20);
    let unoriented = sys.unoriented_graph().unwrap().export_dot();
    assert!(unoriented.starts_with("graph"));
    assert_eq!(unoriented.matches("--").count(), 15);
}

#[test]
fn interval_table_fifth() {
    let t = interval_table();
    assert_eq!(t.len(), 12);
    assert_eq!(t[7].pythagorean, (3, 2));
    assert!((t[7].temperate / 1.5 - 1.0).abs() < 0.002);
}

#[test]
fn distance_examples() {
    let sys = MusicalSystem::from_factors(5, 2, 2.0, 440.0).unwrap();
    let g = sys.unoriented_graph().unwrap();
    assert_eq!(g.distance(0, 6).unwrap(), 2);
    let w = MusicalSystem::western().oriented_graph().unwrap();
    assert_eq!(w.oriented_path_length(0, 9).unwrap(), 3);
    assert_eq!(w.shortest_path(0, 7).unwrap().vertices, vec![0, 3, 7]);
}
