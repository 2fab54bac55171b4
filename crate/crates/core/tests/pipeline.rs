use std::fs;

use loopcat::cocycle::Variety;
use loopcat::iso::are_isomorphic;
use loopcat::pipeline::{
    classify_extensions, enumerate, enumerate_order, filter_extensions, representatives, to_quandle_catalog,
    trivial_catalog, Catalog, CatalogKind, CocycleSpaces, EnumerationJob, JobSpec,
};
use loopcat::symmetry::DEFAULT_COSET_LIMIT;
use loopcat::{Error, Fp, LoopTable};

fn f3() -> Fp {
    Fp::new(3).unwrap()
}

fn spec(kind: CatalogKind, exponent: u32) -> JobSpec {
    JobSpec {
        kind,
        prime: 3,
        exponent,
        factors: None,
        coset_limit: DEFAULT_COSET_LIMIT,
    }
}

#[test]
fn trivial_catalog_extends_to_cyclic_group() {
    for p in [3u32, 5, 7] {
        let fp = Fp::new(p).unwrap();
        let c = enumerate_order(fp, &trivial_catalog(CatalogKind::Bruck, p), DEFAULT_COSET_LIMIT).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.order, p as usize);
        assert!(are_isomorphic(&c.loops().unwrap()[0], &LoopTable::cyclic(p as usize)).is_some());
    }
}

#[test]
fn order_p_squared_has_two_loops() {
    for kind in [CatalogKind::Bruck, CatalogKind::CommutativeAutomorphic, CatalogKind::Quandle] {
        let levels = enumerate(Fp::new(5).unwrap(), 2, kind, DEFAULT_COSET_LIMIT).unwrap();
        assert_eq!(levels.iter().map(Catalog::len).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(levels[1].kind, kind);
    }
}

#[test]
fn catalogs_are_sorted_dense_and_verified() {
    let levels = enumerate(f3(), 3, CatalogKind::Bruck, DEFAULT_COSET_LIMIT).unwrap();
    let c = &levels[2];
    c.verify().unwrap();
    for (i, e) in c.entries.iter().enumerate() {
        assert_eq!(e.id, i + 1);
        assert!(e.factor_id >= 1 && e.factor_id <= 2);
    }
}

#[test]
fn every_entry_has_a_catalogued_central_quotient() {
    let levels = enumerate(f3(), 3, CatalogKind::CommutativeAutomorphic, DEFAULT_COSET_LIMIT).unwrap();
    let factors = levels[1].loops().unwrap();
    for q in levels[2].loops().unwrap() {
        let found = q.central_subloops_of_order_p(3).iter().any(|z| {
            let quotient = q.quotient(z).unwrap();
            factors.iter().any(|f| are_isomorphic(&quotient, f).is_some())
        });
        assert!(found);
    }
}

#[test]
fn shuffled_representatives_give_the_same_classes() {
    let f = LoopTable::abelian(&[3, 3]);
    let spaces = CocycleSpaces::compute(&f, f3(), Variety::Bruck).unwrap();
    let mut reps = representatives(&f, &spaces, DEFAULT_COSET_LIMIT).unwrap();
    let (_, forward, _) = filter_extensions(&f, Variety::Bruck, &reps).unwrap();
    reps.reverse();
    let (_, backward, _) = filter_extensions(&f, Variety::Bruck, &reps).unwrap();
    assert_eq!(forward.len(), backward.len());
    for q in &forward {
        assert_eq!(backward.iter().filter(|r| are_isomorphic(q, r).is_some()).count(), 1);
    }
}

#[test]
fn refusals_are_recorded_and_block_the_next_level() {
    let levels = enumerate(f3(), 1, CatalogKind::Bruck, 1).unwrap();
    let c = enumerate_order(f3(), &levels[0], 1).unwrap();
    assert_eq!(c.refused.len(), 1);
    assert_eq!(c.refused[0].factor_id, 1);
    assert!(c.is_empty());
    assert!(matches!(enumerate_order(f3(), &c, 1), Err(Error::Refused(_))));
}

#[test]
fn factor_outside_the_variety_is_rejected() {
    let s3 = loopcat::loops::text::parse_loop("loop 6\n0 1 2 3 4 5\n1 2 0 5 3 4\n2 0 1 4 5 3\n3 4 5 0 1 2\n4 5 3 2 0 1\n5 3 4 1 2 0\n").unwrap();
    assert!(!s3.is_commutative());
    let err = classify_extensions(&s3, f3(), Variety::CommutativeAutomorphic, DEFAULT_COSET_LIMIT).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

#[test]
fn save_load_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let levels = enumerate(f3(), 3, CatalogKind::Quandle, DEFAULT_COSET_LIMIT).unwrap();
    let c = &levels[2];
    c.save(dir.path()).unwrap();
    let back = Catalog::load(dir.path()).unwrap();
    assert_eq!(&back, c);
    assert!(back.diff(c).unwrap().is_empty());

    let file = dir.path().join(c.entries[0].file_name());
    let other = fs::read_to_string(dir.path().join(c.entries[1].file_name())).unwrap();
    fs::write(&file, other).unwrap();
    assert!(Catalog::load(dir.path()).is_err());
}

#[test]
fn diff_reports_missing_entries() {
    let levels = enumerate(f3(), 3, CatalogKind::Bruck, DEFAULT_COSET_LIMIT).unwrap();
    let full = &levels[2];
    let mut partial = full.clone();
    partial.entries.remove(3);
    let d = full.diff(&partial).unwrap();
    assert_eq!(d.only_left, vec![4]);
    assert!(d.only_right.is_empty());
    assert_eq!(d.matched.len(), 6);
}

#[test]
fn quandle_catalog_matches_bruck_catalog() {
    let levels = enumerate(f3(), 3, CatalogKind::Bruck, DEFAULT_COSET_LIMIT).unwrap();
    let q = to_quandle_catalog(&levels[2]).unwrap();
    assert_eq!(q.loops().unwrap(), levels[2].loops().unwrap());
    assert!(to_quandle_catalog(&enumerate(f3(), 1, CatalogKind::CommutativeAutomorphic, 10).unwrap()[0]).is_err());
}

#[test]
fn resume_after_any_interruption_gives_the_same_catalog() {
    for kind in [CatalogKind::Bruck, CatalogKind::Quandle] {
        let reference_dir = tempfile::tempdir().unwrap();
        let reference = EnumerationJob::new(reference_dir.path(), spec(kind, 3)).run().unwrap();
        assert_eq!(reference.len(), 7);
        let mut stop = 1;
        loop {
            let dir = tempfile::tempdir().unwrap();
            match EnumerationJob::new(dir.path(), spec(kind, 3)).stop_after(stop).run() {
                Err(Error::Interrupted(n)) => assert_eq!(n, stop),
                Ok(c) => {
                    assert_eq!(c, reference);
                    break;
                }
                Err(e) => panic!("{e}"),
            }
            let resumed = EnumerationJob::resume(dir.path()).unwrap().run().unwrap();
            assert_eq!(resumed, reference, "stopped after {stop} checkpoints");
            assert_eq!(Catalog::load(dir.path()).unwrap(), reference);
            stop += 1;
        }
        assert!(stop > 10, "only {stop} checkpoints");
    }
}

#[test]
fn extending_a_saved_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let factors = dir.path().join("nine");
    EnumerationJob::new(&factors, spec(CatalogKind::CommutativeAutomorphic, 2)).run().unwrap();
    let mut s = spec(CatalogKind::CommutativeAutomorphic, 3);
    s.factors = Some(factors.clone());
    let out = dir.path().join("twentyseven");
    let c = EnumerationJob::new(&out, s.clone()).run().unwrap();
    assert_eq!(c.len(), 7);
    assert!(c.entries.iter().all(|e| e.factor_id >= 1));

    s.exponent = 2;
    assert!(matches!(EnumerationJob::new(dir.path().join("bad"), s.clone()).run(), Err(Error::Argument(_))));
    s.exponent = 4;
    assert!(matches!(EnumerationJob::new(&out, s).run(), Err(Error::Argument(_))));
}
