use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index;
use sfstkit::dataset::{parse_dataset, print_dataset};
use sfstkit::format::{parse_machine, print_machine_with_meta};
use sfstkit::minimize::is_empty_language;
use sfstkit::rng::{rng_for, stream};
use sfstkit::scan::{build_scan_fragment, replicate_subgraph};
use sfstkit::{
    compare_split_coverage, equivalent, trim, Dataset, FinalityPolicy, GenConfig, OstiaConfig,
    Sfst, SplitKind, WalkConfig,
};

use crate::error::{CliError, Result};
use crate::manifest::Manifest;
use crate::{
    CoverageArgs, EvalArgs, GenerateArgs, MinimizeArgs, OstiaArgs, SampleArgs, ScanArgs, SplitArgs,
};

fn load_machine(mf: &mut Manifest, name: &str, path: &Path) -> Result<Sfst> {
    let text = mf.read(name, path)?;
    parse_machine(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_dataset(mf: &mut Manifest, name: &str, path: &Path) -> Result<Dataset> {
    let text = mf.read(name, path)?;
    parse_dataset(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn generate(a: GenerateArgs, argv: &[String]) -> Result<()> {
    let cfg = GenConfig {
        n_states: a.states as usize,
        input_alphabet_size: a.sigma as usize,
        output_alphabet_size: a.gamma as usize,
        allow_empty_emission: a.lambda_emission,
        seed: a.seed,
        max_rejections: a.max_rejections as usize,
    };
    let mut mf = Manifest::new("generate", argv, Some(a.seed));
    mf.config(cfg.to_kv());
    let m = sfstkit::generate(&cfg)?;
    mf.write("machine", &a.out, &print_machine_with_meta(&m, &cfg.to_kv()))?;
    mf.result("states", m.num_states());
    mf.result("transitions", m.num_transitions());
    mf.finish(&a.out)
}

pub fn sample(a: SampleArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("sample", argv, Some(a.seed));
    let m = load_machine(&mut mf, "machine", &a.machine)?;
    let cfg = WalkConfig {
        stop_probability: a.stop,
        max_steps: a.max_steps,
        target_pairs: a.pairs,
        seed: a.seed,
        max_attempts: a.max_attempts,
    };
    mf.config(cfg.to_kv());
    let d = sfstkit::random_walk(&m, &cfg)?;
    mf.write("dataset", &a.out, &print_dataset(&d))?;
    mf.result("pairs", d.len());
    mf.result("max_input_len", d.max_input_len());
    mf.finish(&a.out)
}

pub fn split(a: SplitArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("split", argv, Some(a.seed));
    let d = load_dataset(&mut mf, "dataset", &a.data)?;
    let kind = match (a.fraction, a.length_cutoff, a.train_size) {
        (Some(fraction), _, _) => SplitKind::Random { fraction },
        (_, Some(cutoff), _) => SplitKind::ByLength { cutoff },
        (_, _, Some(train_size)) => SplitKind::RandomSize { train_size },
        _ => unreachable!("clap requires one split kind"),
    };
    mf.config([("kind".to_string(), format!("{kind:?}"))]);
    let s = sfstkit::split(&d, kind, a.seed)?;
    mf.write("train", &a.train, &print_dataset(&s.train))?;
    mf.write("test", &a.test, &print_dataset(&s.test))?;
    mf.result("train_pairs", s.train.len());
    mf.result("test_pairs", s.test.len());
    mf.finish(&a.train)
}

pub fn coverage(a: CoverageArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("coverage", argv, a.compare_length.map(|_| a.seed));
    let m = load_machine(&mut mf, "machine", &a.machine)?;
    let d = load_dataset(&mut mf, "dataset", &a.data)?;
    mf.config([("threshold".to_string(), a.threshold.to_string())]);
    let (text, met) = match a.compare_length {
        None => {
            let r = sfstkit::coverage(&m, &d, a.threshold)?;
            mf.result("min_count", r.min_count);
            (r.to_text(), r.threshold_met)
        }
        Some(fraction) => {
            mf.config([("compare_length".to_string(), fraction.to_string())]);
            let (by_len, random) =
                compare_split_coverage(&m, &d, None, fraction, a.seed, a.threshold)?;
            mf.result("length_min_count", by_len.min_count);
            mf.result("random_min_count", random.min_count);
            let mut s = String::from("section=length_split\n");
            s.push_str(&by_len.to_text());
            s.push_str("section=random_split\n");
            s.push_str(&random.to_text());
            (s, by_len.threshold_met)
        }
    };
    if !met {
        eprintln!(
            "warning: some transition has fewer than {} training crossings",
            a.threshold
        );
    }
    mf.write("report", &a.out, &text)?;
    mf.finish(&a.out)
}

pub fn ostia(a: OstiaArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("ostia", argv, Some(a.seed));
    let d = load_dataset(&mut mf, "dataset", &a.data)?;
    let pairs = if a.max_samples > 0 && d.len() > a.max_samples {
        let mut rng = rng_for(a.seed, stream::SUBSAMPLE);
        let mut keep = index::sample(&mut rng, d.len(), a.max_samples).into_vec();
        keep.sort_unstable();
        keep.into_iter().map(|i| d.pairs[i].clone()).collect()
    } else {
        d.pairs
    };
    let cfg = OstiaConfig {
        finality: if a.classic {
            FinalityPolicy::Classic
        } else {
            FinalityPolicy::Strict
        },
        ..OstiaConfig::default()
    };
    let meta = vec![
        ("samples".to_string(), pairs.len().to_string()),
        ("finality".to_string(), format!("{:?}", cfg.finality)),
    ];
    mf.config(meta.clone());
    let (m, stats) = sfstkit::ostia_infer_with(&pairs, &cfg)?;
    mf.write("machine", &a.out, &print_machine_with_meta(&m, &meta))?;
    for (k, v) in stats.to_kv() {
        mf.result(&k, v);
    }
    mf.finish(&a.out)
}

pub fn scan(a: ScanArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("scan", argv, None);
    let prims: Vec<&str> = a.primitives.iter().map(String::as_str).collect();
    mf.config([
        ("primitives".to_string(), prims.join(",")),
        ("repetition".to_string(), a.repetition.to_string()),
        ("replicate".to_string(), a.replicate.unwrap_or(0).to_string()),
    ]);
    let mut block = build_scan_fragment(&prims)?;
    if a.repetition {
        block = block.with_repetition()?;
    }
    if let Some(copies) = a.replicate {
        let entries: Vec<_> = (0..copies)
            .map(|i| block.symbols.intern(&format!("copy{i}")))
            .collect();
        block.machine = replicate_subgraph(&block.machine, copies, &entries)?;
    }
    let symbols_path = a.symbols.unwrap_or_else(|| {
        let mut p = a.out.as_os_str().to_owned();
        p.push(".symbols");
        p.into()
    });
    mf.write("machine", &a.out, &sfstkit::print_machine(&block.machine))?;
    mf.write("symbols", &symbols_path, &block.symbols.to_text())?;
    mf.result("states", block.machine.num_states());
    mf.finish(&a.out)
}

pub fn minimize(a: MinimizeArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("minimize", argv, None);
    let m = load_machine(&mut mf, "machine", &a.machine)?;
    let t = trim(&m);
    let min = if is_empty_language(&t) {
        t
    } else {
        sfstkit::minimize(&t)?
    };
    mf.write("machine", &a.out, &sfstkit::print_machine(&min))?;
    mf.result("states_before", m.num_states());
    mf.result("states_after", min.num_states());
    mf.finish(&a.out)
}

pub fn eval(a: EvalArgs, argv: &[String]) -> Result<()> {
    let mut mf = Manifest::new("eval", argv, None);
    let learned = load_machine(&mut mf, "learned", &a.learned)?;
    let target = load_machine(&mut mf, "target", &a.target)?;
    let mut report = String::new();
    let eq = equivalent(&learned, &target);
    let _ = writeln!(report, "equivalent={eq}");
    let _ = writeln!(report, "learned_states={}", learned.num_states());
    let _ = writeln!(report, "target_states={}", target.num_states());
    if let Some(path) = &a.test {
        let d = load_dataset(&mut mf, "test", path)?;
        // inputs outside the learned alphabet count as misses
        let correct = d
            .pairs
            .iter()
            .filter(|(i, o)| learned.transduce(i).ok().flatten().as_ref() == Some(o))
            .count();
        let accuracy = if d.is_empty() {
            0.0
        } else {
            correct as f64 / d.len() as f64
        };
        let _ = writeln!(report, "test_pairs={}", d.len());
        let _ = writeln!(report, "correct={correct}");
        let _ = writeln!(report, "accuracy={accuracy:.6}");
        mf.result("accuracy", format!("{accuracy:.6}"));
    }
    mf.result("equivalent", eq);
    mf.write("report", &a.out, &report)?;
    mf.finish(&a.out)
}
