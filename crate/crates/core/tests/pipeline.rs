use std::fs;

use fnef::cone::normalize_lattice;
use fnef::divisor::{to_ca_basis, SymDivisorB};
use fnef::feasibility::{verify_proof_json, Certificate};
use fnef::pipeline::{
    analyze_base_locus, report, run_bpf_campaign, run_semiample_campaign, verify_campaign_dir, CacheEntry, CampaignConfig,
    Format, Generators, Mode, Verdict, VerdictTable,
};
use fnef::rational::{int, primitive_integer_vector};

fn bpf(n: usize) -> CampaignConfig {
    let mut cfg = CampaignConfig::new(n, Mode::Bpf);
    cfg.m_cap = 1;
    cfg
}

#[test]
fn small_semiample_campaigns_pass() {
    for n in 5..=8 {
        let t = run_semiample_campaign(&CampaignConfig::new(n, Mode::Semiample)).unwrap();
        assert!(t.rollup.all_pass, "n={n}");
        assert!(t.divisors.iter().all(|d| d.semiample == Some(true)));
        assert_eq!(t.rollup.cells, t.divisors.len() * t.orbits.len());
    }
    // n=5: one generator, one orbit.
    let t = run_semiample_campaign(&CampaignConfig::new(5, Mode::Semiample)).unwrap();
    assert_eq!((t.divisors.len(), t.orbits.len()), (1, 1));
    let t6 = run_semiample_campaign(&CampaignConfig::new(6, Mode::Semiample)).unwrap();
    assert_eq!(t6.divisors.len(), 2);
}

#[test]
fn config_validation() {
    let mut cfg = CampaignConfig::new(15, Mode::Bpf);
    assert!(cfg.validate().is_err());
    cfg.max_n = 16;
    assert!(cfg.validate().is_ok());
    let mut cfg = CampaignConfig::new(8, Mode::Semiample);
    cfg.m = 2;
    assert!(cfg.validate().is_err());
    let mut cfg = bpf(8);
    cfg.m = 0;
    assert!(cfg.validate().is_err());
    let mut cfg = bpf(8);
    cfg.m = 3;
    cfg.m_cap = 2;
    assert!(cfg.validate().is_err());
    let lat = normalize_lattice(8).unwrap();
    let mut cfg = bpf(8);
    cfg.generators = Generators::Explicit(vec![lat.divisor_of(&[1, 0, 0]), normalize_lattice(9).unwrap().divisor_of(&[1, 0, 0])]);
    assert!(cfg.validate().is_err());
    assert!(run_semiample_campaign(&bpf(8)).is_err());
}

#[test]
fn proofs_on_disk_verify_and_corruption_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = bpf(8);
    cfg.out_dir = Some(dir.path().to_path_buf());
    let t = run_bpf_campaign(&cfg).unwrap();
    assert!(t.rollup.all_pass);
    assert!(verify_campaign_dir(dir.path()).unwrap().is_empty());
    let manifest = VerdictTable::parse_json(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest, t);

    let rel = t.divisors[0].cells[0].proof.clone().unwrap();
    let path = dir.path().join(&rel);
    let mut cert = Certificate::parse_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let w = cert.weighting.get(0, 1).clone();
    cert.weighting.set(0, 1, w + int(1)).unwrap();
    fs::write(&path, cert.to_json()).unwrap();
    assert!(!verify_proof_json(&fs::read_to_string(&path).unwrap()).unwrap().is_valid());
    assert_eq!(verify_campaign_dir(dir.path()).unwrap().len(), 1);
}

#[test]
fn poisoned_cache_is_resolved() {
    let cache = tempfile::tempdir().unwrap();
    let mut cfg = bpf(9);
    cfg.shared_nodes = 0;
    cfg.cache_dir = Some(cache.path().to_path_buf());
    let first = run_bpf_campaign(&cfg).unwrap();
    let entries: Vec<_> = fs::read_dir(cache.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), first.rollup.cells);

    // Corrupt one weight of every stored certificate, keeping the digest
    // consistent so only the proof check can notice.
    for p in &entries {
        let e: CacheEntry = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        let mut cert = Certificate::parse_json(e.proof.as_ref().unwrap()).unwrap();
        let (i, j) = (0..cert.n())
            .flat_map(|i| (i + 1..cert.n()).map(move |j| (i, j)))
            .find(|&(i, j)| *cert.weighting.get(i, j) > int(0))
            .unwrap();
        let w = cert.weighting.get(i, j).clone();
        cert.weighting.set(i, j, w - int(1)).unwrap();
        let bad = CacheEntry::new(e.key.clone(), e.verdict, e.basis.clone(), e.stats.clone(), Some(cert.to_json()));
        fs::write(p, serde_json::to_string(&bad).unwrap()).unwrap();
    }
    // Flip a verdict without fixing the digest.
    let text = fs::read_to_string(&entries[0]).unwrap().replace("\"feasible\"", "\"infeasible\"");
    fs::write(&entries[0], text).unwrap();

    let second = run_bpf_campaign(&cfg).unwrap();
    assert_eq!(second, first);
    for p in &entries {
        let e: CacheEntry = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        assert_eq!(e.verdict, Verdict::Feasible);
        assert!(verify_proof_json(e.proof.as_ref().unwrap()).unwrap().is_valid());
    }
    // A clean cache is reused as is.
    assert_eq!(run_bpf_campaign(&cfg).unwrap(), first);
}

#[test]
fn jobs_do_not_change_tables() {
    let run = |jobs| {
        let mut cfg = bpf(9);
        cfg.shared_nodes = 0;
        cfg.jobs = jobs;
        run_bpf_campaign(&cfg).unwrap()
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn reports() {
    let t = run_bpf_campaign(&bpf(7)).unwrap();
    let json = report(&t, Format::Json);
    assert_eq!(VerdictTable::parse_json(&json).unwrap(), t);
    let csv = report(&t, Format::Csv);
    assert_eq!(csv.lines().count(), 1 + t.rollup.cells);
    let text = report(&t, Format::Text);
    assert!(text.starts_with("n=7: G-semi-ample cone = F-nef cone: YES; Hilbert basis m=1 failures: 0"), "{text}");

    let mut empty = t.clone();
    empty.divisors.clear();
    assert_eq!(report(&empty, Format::Csv).lines().count(), 1);
    assert!("yaml".parse::<Format>().is_err());
}

#[test]
fn explicit_rational_generators_are_scaled() {
    let lat = normalize_lattice(8).unwrap();
    let d = to_ca_basis(&SymDivisorB::pullback_d2(8).unwrap());
    let mut cfg = CampaignConfig::new(8, Mode::Semiample);
    cfg.generators = Generators::Explicit(vec![d.scale(&fnef::rational::frac(1, 7))]);
    let t = run_semiample_campaign(&cfg).unwrap();
    assert!(t.rollup.all_pass);
    let prim: Vec<i64> = primitive_integer_vector(&lat.to_normalized(&d)).iter().map(|x| x.try_into().unwrap()).collect();
    assert_eq!(t.divisors[0].normalized, prim);
}

#[test]
fn pullback_base_locus_is_empty() {
    for n in 5..=8 {
        let lat = normalize_lattice(n).unwrap();
        let d = to_ca_basis(&SymDivisorB::pullback_d2(n).unwrap());
        let v: Vec<i64> = primitive_integer_vector(&lat.to_normalized(&d)).iter().map(|x| x.try_into().unwrap()).collect();
        let b = analyze_base_locus(n, &lat.divisor_of(&v), 1).unwrap();
        assert!(b.strata.is_empty() && b.fpoint_orbits.is_empty(), "n={n}");
    }
}
