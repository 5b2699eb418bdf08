//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines reach stdout; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use raney_core::cdcheck::{distributive_oracle, raney_join_criterion, raney_meet_criterion};
use raney_core::map::{big_meet, interior, pointwise_meet, special, Special};
use raney_core::quantaloid::{
    central_elements, check_involutive_axioms, check_involutive_axioms_with,
    cyclic_dualizing_elements, cyclic_elements, enumerate_homset, star, AxiomOptions,
    DEFAULT_CAP,
};
use raney_core::suite::{random_corpus, run_suite, Status, DEFAULT_SEED, SAMPLE_DRAWS};
use raney_core::{builtin_corpus, Coverage, LatMap, Lattice};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn values(maps: Vec<LatMap>) -> BTreeSet<Vec<usize>> {
    maps.into_iter().map(LatMap::into_values).collect()
}

fn map(l: &Arc<Lattice>, kind: Special) -> Vec<usize> {
    special(l, kind).unwrap().into_values()
}

fn is_cd(l: &Lattice) -> bool {
    raney_join_criterion(l).holds
}

fn cd_equivalence(corpus: &[Arc<Lattice>]) -> Outcome {
    let start = Instant::now();
    let mut all = corpus.to_vec();
    all.extend(random_corpus(200, 1000, 7));
    for l in &all {
        let (j, m, o) = (
            raney_join_criterion(l).holds,
            raney_meet_criterion(l).holds,
            distributive_oracle(l).holds,
        );
        ensure(j == m && m == o, || {
            format!("{}: join {j}, meet {m}, oracle {o}", l.name())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    let cd = all.iter().filter(|l| is_cd(l)).count();
    Ok(format!(
        "{} lattices agree ({cd} distributive) in {elapsed:.2?}",
        all.len()
    ))
}

fn homset_counts() -> Outcome {
    let mut got = Vec::new();
    for (l, want) in [
        (Lattice::chain(2), 2),
        (Lattice::chain(3), 6),
        (Lattice::boolean(2).unwrap(), 16),
    ] {
        let l = Arc::new(l);
        let n = enumerate_homset(&l, &l, DEFAULT_CAP).unwrap().len();
        ensure(n == want, || format!("|Q({})| = {n}, want {want}", l.name()))?;
        got.push(format!("|Q({})| = {n}", l.name()));
    }
    Ok(got.join(", "))
}

fn cyclic(corpus: &[Arc<Lattice>]) -> Outcome {
    let mut checked = 0;
    let mut triggered = 0;
    for l in corpus.iter().filter(|l| l.len() <= 6) {
        let q = enumerate_homset(l, l, DEFAULT_CAP).unwrap();
        let (o, top) = (map(l, Special::O), map(l, Special::Const(l.top())));
        let found = values(cyclic_elements(&q).unwrap());
        ensure(found.iter().all(|a| *a == o || *a == top), || {
            format!("{}: cyclic {found:?}", l.name())
        })?;
        if o != top && found.contains(&o) {
            triggered += 1;
            ensure(distributive_oracle(l).holds, || {
                format!("{}: o cyclic but not distributive", l.name())
            })?;
        }
        let expect = match l.name() {
            "c3" => Some(BTreeSet::from([o.clone(), top.clone()])),
            "n5" => Some(BTreeSet::from([top.clone()])),
            _ => None,
        };
        if let Some(expect) = expect {
            ensure(found == expect, || format!("{}: cyclic {found:?}", l.name()))?;
        }
        if l.name() == "m3" {
            ensure(o == top, || "m3: o != c_top".to_string())?;
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} lattices, o cyclic and != c_top on {triggered} (all distributive)"
    ))
}

fn center(corpus: &[Arc<Lattice>]) -> Outcome {
    let mut checked = 0;
    for l in corpus.iter().filter(|l| l.len() <= 6) {
        let q = enumerate_homset(l, l, DEFAULT_CAP).unwrap();
        let found = values(central_elements(&q).unwrap());
        let want = BTreeSet::from([l.elements().collect(), vec![l.bottom(); l.len()]]);
        ensure(found == want, || format!("{}: central {found:?}", l.name()))?;
        checked += 1;
    }
    Ok(format!("{checked} lattices, center = {{id, c_bot}}"))
}

fn involution(corpus: &[Arc<Lattice>]) -> Outcome {
    let opts = AxiomOptions {
        sample: Some((DEFAULT_SEED, SAMPLE_DRAWS)),
        ..AxiomOptions::default()
    };
    let (mut exhaustive, mut sampled) = (0, Vec::new());
    for l in corpus.iter().filter(|l| is_cd(l)) {
        let r = check_involutive_axioms_with(l, l, &opts).unwrap();
        ensure(r.holds, || format!("{}: {:?}", l.name(), r.witness))?;
        match r.coverage {
            Coverage::Exhaustive => exhaustive += 1,
            Coverage::Sampled { .. } => sampled.push(l.name().to_string()),
        }
    }
    let c2 = Arc::new(Lattice::chain(2));
    let c3 = Arc::new(Lattice::chain(3));
    let b2 = Arc::new(Lattice::boolean(2).unwrap());
    for (l, m) in [(&c2, &b2), (&c3, &b2)] {
        let r = check_involutive_axioms(l, m).unwrap();
        ensure(r.holds, || format!("({}, {}): {:?}", l.name(), m.name(), r.witness))?;
    }
    for l in [Lattice::m3(), Lattice::n5()] {
        let l = Arc::new(l);
        ensure(!check_involutive_axioms(&l, &l).unwrap().holds, || {
            format!("{}: axioms hold", l.name())
        })?;
        let q = enumerate_homset(&l, &l, DEFAULT_CAP).unwrap();
        ensure(cyclic_dualizing_elements(&q).unwrap().is_empty(), || {
            format!("{}: cyclic dualizing element found", l.name())
        })?;
    }
    Ok(format!(
        "{exhaustive} distributive lattices exhaustive, sampled on [{}]; (c2,b2), (c3,b2) pass; m3, n5 fail with no cyclic dualizing element",
        sampled.join(", ")
    ))
}

fn uniqueness(corpus: &[Arc<Lattice>]) -> Outcome {
    let (mut star_checked, mut unique_checked) = (0, 0);
    for l in corpus.iter().filter(|l| is_cd(l)) {
        let o = map(l, Special::O);
        let s = star(&LatMap::identity(l)).unwrap().into_values();
        ensure(s == o, || format!("{}: star(id) = {s:?}, o = {o:?}", l.name()))?;
        star_checked += 1;
        if l.len() <= 5 {
            let q = enumerate_homset(l, l, DEFAULT_CAP).unwrap();
            let found = values(cyclic_dualizing_elements(&q).unwrap());
            ensure(found == BTreeSet::from([o.clone()]), || {
                format!("{}: cyclic dualizing {found:?}", l.name())
            })?;
            unique_checked += 1;
        }
    }
    Ok(format!(
        "star(id) = o on {star_checked} lattices; o the unique cyclic dualizing element on {unique_checked}"
    ))
}

fn transform_laws(corpus: &[Arc<Lattice>]) -> Outcome {
    let start = Instant::now();
    let report = run_suite(corpus, &["T1", "T2", "T8", "T9", "T10"], DEFAULT_SEED)
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(c) = report
        .results
        .iter()
        .find(|c| c.status == Status::Fail || c.unexpected)
    {
        return Err(format!("{} on {}: {:?} {:?}", c.check, c.lattice, c.witness, c.reason));
    }
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    let exhaustive = report
        .results
        .iter()
        .filter(|c| c.coverage == Some(Coverage::Exhaustive))
        .count();
    Ok(format!(
        "{} cells pass ({exhaustive} exhaustive), {} skipped as not distributive, in {elapsed:.2?}",
        report.summary.pass, report.summary.skip
    ))
}

fn units(corpus: &[Arc<Lattice>]) -> Outcome {
    let names = |pred: &dyn Fn(&Arc<Lattice>) -> bool| -> BTreeSet<String> {
        corpus
            .iter()
            .filter(|l| pred(l))
            .map(|l| l.name().to_string())
            .collect()
    };
    let le = |l: &Lattice, a: &[usize], b: &[usize]| a.iter().zip(b).all(|(&x, &y)| l.leq(x, y));
    let id = |l: &Lattice| l.elements().collect::<Vec<_>>();
    let mix = names(&|l| le(l, &map(l, Special::O), &id(l)));
    let chains = names(&|l| l.is_chain());
    ensure(mix == chains, || format!("mix on {mix:?}, chains {chains:?}"))?;
    // In the involutive setting (L completely distributive) comix is id <= o.
    let comix = names(&|l| is_cd(l) && le(l, &id(l), &map(l, Special::O)));
    let trivial = names(&|l| l.len() == 1);
    ensure(comix == trivial, || format!("comix on {comix:?}"))?;
    let raw = names(&|l| le(l, &id(l), &map(l, Special::O)));
    let smooth = names(&|l| l.is_smooth());
    ensure(raw == smooth, || format!("id <= o on {raw:?}, smooth {smooth:?}"))?;
    Ok(format!(
        "mix on exactly the {} chains; comix on exactly {:?}; id <= o on the {} smooth lattices",
        chains.len(),
        comix,
        smooth.len()
    ))
}

fn big_meets(corpus: &[Arc<Lattice>]) -> Outcome {
    let mut pairs = 0;
    for l in corpus.iter().filter(|l| l.len() <= 4 && is_cd(l)) {
        let q = enumerate_homset(l, l, DEFAULT_CAP).unwrap();
        for f in q.maps() {
            for g in q.maps() {
                let fam = [f.clone(), g.clone()];
                let bm = big_meet(&fam).unwrap();
                let int = interior(&pointwise_meet(&fam).unwrap());
                ensure(bm == int, || {
                    format!("{}: {:?} {:?}", l.name(), f.values(), g.values())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree"))
}

fn homset_distributive() -> Outcome {
    for n in [2, 3] {
        let l = Arc::new(Lattice::chain(n));
        let ql = enumerate_homset(&l, &l, DEFAULT_CAP)
            .unwrap()
            .to_lattice()
            .unwrap();
        ensure(distributive_oracle(&ql).holds, || format!("Q(c{n}) not distributive"))?;
    }
    Ok("Q(c2) and Q(c3) are distributive".to_string())
}

fn main() {
    let corpus = builtin_corpus();
    let criteria: Vec<Criterion> = vec![
        ("CD equivalence", Box::new(|| cd_equivalence(&corpus))),
        ("homset counts", Box::new(homset_counts)),
        ("cyclic elements", Box::new(|| cyclic(&corpus))),
        ("center", Box::new(|| center(&corpus))),
        ("involution", Box::new(|| involution(&corpus))),
        ("uniqueness", Box::new(|| uniqueness(&corpus))),
        ("Raney-transform laws", Box::new(|| transform_laws(&corpus))),
        ("units", Box::new(|| units(&corpus))),
        ("big meet", Box::new(|| big_meets(&corpus))),
        ("Q(L) distributivity", Box::new(homset_distributive)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
