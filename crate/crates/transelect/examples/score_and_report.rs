//! Inspect selections without running one: dump every candidate's
//! first-round score under each method, then summarize a finished
//! selection's per-corpus composition and score distribution.
//!
//! ```bash
//! cargo run -p transelect --example score_and_report
//! ```

use transelect::corpus::{concat_corpora, ParallelCorpus, TestSet};
use transelect::features::NgramConfig;
use transelect::report::{provenance_stats, score_histogram};
use transelect::selection::{
    fda_select, score_dump, FdaConfig, InrConfig, SelectorConfig,
};

fn main() -> transelect::Result<()> {
    let general_src = vec!["the weather report", "parliament adjourned", "a b c"];
    let general_tgt: Vec<String> = general_src.iter().map(|s| format!("<{s}>")).collect();
    let domain_src = vec!["the weather tomorrow", "sunny weather expected"];
    let domain_tgt: Vec<String> = domain_src.iter().map(|s| format!("<{s}>")).collect();
    let pool = concat_corpora(vec![
        ParallelCorpus::from_lines("general", general_src, general_tgt)?,
        ParallelCorpus::from_lines("in-domain", domain_src, domain_tgt)?,
    ])?;
    let test = TestSet::from_lines(vec!["the weather tomorrow"])?;
    let ngram = NgramConfig::new(1, 3)?;

    // first-round scores for every candidate, in pool order — handy for
    // threshold tuning and for eyeballing what a selector would do first
    let configs = [
        SelectorConfig::Tfidf {
            ngram,
            per_sentence: false,
        },
        SelectorConfig::Inr(InrConfig::new(2, ngram)?),
        SelectorConfig::Fda(FdaConfig::default()),
    ];
    println!("initial scores per candidate:");
    print!("{:>28}", "candidate");
    for config in &configs {
        print!("{:>8}", config.method().to_string());
    }
    println!();
    let dumps: Vec<Vec<f64>> = configs
        .iter()
        .map(|config| score_dump(&pool, &test, config))
        .collect::<transelect::Result<_>>()?;
    for global_index in 0..pool.len() {
        print!("{:>28}", pool.candidate(global_index).raw());
        for dump in &dumps {
            print!("{:>8.3}", dump[global_index]);
        }
        println!();
    }

    // run a selection and report where its lines came from
    let selection = fda_select(&pool, &test, 4, &FdaConfig::default())?;
    let report = provenance_stats(&selection)?;
    println!("\ncomposition of the selection:");
    print!("{}", report.render_table());

    let histogram = score_histogram(&selection, 4)?;
    println!("\nscore histogram over 4 buckets: {histogram:?}");
    Ok(())
}
