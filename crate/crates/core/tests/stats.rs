mod support;

use std::collections::BTreeSet;

use mcr_core::stats::{
    compute_pos_stats, compute_stats, compute_stats_with_core, parse_pos_report, parse_report, render_pos_report,
    render_report, Format, LangStats, Pct, StatsError,
};
use mcr_core::{load_bundle, Lang, Pos};
use support::{raw_rows, toy};

fn lang(s: &str) -> Lang {
    s.parse().unwrap()
}

/// Percentage to one decimal from a float, rounding halves away from zero.
fn pct(num: usize, den: usize) -> String {
    format!("{:.1}", (num as f64 * 1000.0 / den as f64).round() / 10.0)
}

/// Counts straight from the fixture files.
fn oracle(code: &str) -> (usize, usize, usize, String, String, String, String) {
    let dir = toy().join(format!("{code}-30"));
    let synsets = raw_rows(&dir.join("synsets.tsv"));
    let variants = raw_rows(&dir.join("variants.tsv"));
    let links = raw_rows(&dir.join("to_ili.tsv"));
    let examples: BTreeSet<String> = raw_rows(&dir.join("examples.tsv")).into_iter().map(|r| r[0].clone()).collect();
    let words: BTreeSet<(String, String)> =
        variants.iter().map(|r| (r[0].clone(), r[1].rsplit('-').next().unwrap().to_string())).collect();
    let glossed = synsets.iter().filter(|r| r[2] != "-").count();
    let linked: BTreeSet<&String> = links.iter().map(|r| &r[1]).collect();
    let core = raw_rows(&toy().join("core_synsets.txt"));
    let covered = core.iter().filter(|r| linked.contains(&r[0])).count();
    (
        synsets.len(),
        words.len(),
        variants.len(),
        pct(covered, core.len()),
        pct(links.len(), synsets.len()),
        pct(glossed, synsets.len()),
        pct(examples.len(), synsets.len()),
    )
}

#[test]
fn toy_stats_match_file_counts() {
    let repo = load_bundle(&toy()).unwrap();
    for code in ["eng", "spa", "gal"] {
        let s = compute_stats(&repo, &lang(code), repo.core_list()).unwrap();
        let (synsets, words, senses, core, cili, def, ex) = oracle(code);
        assert_eq!((s.synsets, s.words, s.forms, s.senses), (synsets, words, words, senses), "{code}");
        assert_eq!(s.core_pct.unwrap().to_string(), core, "{code}");
        assert_eq!(s.cili_pct.to_string(), cili, "{code}");
        assert_eq!(s.def_pct.to_string(), def, "{code}");
        assert_eq!(s.ex_pct.to_string(), ex, "{code}");
    }
    let gal = compute_stats(&repo, &lang("gal"), repo.core_list()).unwrap();
    assert_eq!(
        (gal.synsets, gal.core_pct, gal.cili_pct, gal.def_pct, gal.ex_pct),
        (6, Some(Pct(800)), Pct(1000), Pct(333), Pct(167))
    );
    let spa = compute_stats(&repo, &lang("spa"), repo.core_list()).unwrap();
    assert_eq!((spa.synsets, spa.words, spa.senses, spa.def_pct), (10, 17, 17, Pct(0)));
}

#[test]
fn pos_rows_sum_to_totals() {
    let repo = load_bundle(&toy()).unwrap();
    for code in ["eng", "spa", "gal"] {
        let s = compute_stats(&repo, &lang(code), None).unwrap();
        let rows = compute_pos_stats(&repo, &lang(code)).unwrap();
        assert_eq!(rows.iter().map(|r| r.synsets).sum::<usize>(), s.synsets);
        assert_eq!(rows.iter().map(|r| r.senses).sum::<usize>(), s.senses);
        assert_eq!(rows.iter().map(|r| r.words).sum::<usize>(), s.words);
        assert!(rows.iter().all(|r| r.synsets > 0));
    }
    let gal = compute_pos_stats(&repo, &lang("gal")).unwrap();
    assert_eq!(gal.len(), 1);
    assert_eq!((gal[0].pos, gal[0].synsets_pct, gal[0].senses_pct), (Pos::Noun, Pct(1000), Pct(1000)));
    let eng = compute_pos_stats(&repo, &lang("eng")).unwrap();
    let got: Vec<(Pos, usize, String)> = eng.iter().map(|r| (r.pos, r.synsets, r.synsets_pct.to_string())).collect();
    assert_eq!(got, [(Pos::Noun, 10, pct(10, 12)), (Pos::Verb, 2, pct(2, 12))]);
}

#[test]
fn core_handling() {
    let repo = load_bundle(&toy()).unwrap();
    assert_eq!(compute_stats(&repo, &lang("spa"), None).unwrap().core_pct, None);
    assert_eq!(compute_stats_with_core(&repo, &lang("spa"), None), Err(StatsError::MissingCoreList));
    assert_eq!(compute_stats(&repo, &lang("cat"), None), Err(StatsError::UnknownLanguage(lang("cat"))));
}

#[test]
fn rendering_round_trips() {
    let repo = load_bundle(&toy()).unwrap();
    let report: Vec<LangStats> =
        ["eng", "spa"].iter().map(|c| compute_stats(&repo, &lang(c), repo.core_list()).unwrap()).collect();
    let tsv = render_report(&report, Format::Tsv);
    assert_eq!(tsv, render_report(&report, Format::Tsv));
    assert_eq!(parse_report(&tsv).unwrap(), report);
    let md = render_report(&report, Format::Markdown);
    assert_eq!(md.lines().count(), 4, "header, rule and two data rows");

    let mut no_core = report.clone();
    no_core[0].core_pct = None;
    assert_eq!(parse_report(&render_report(&no_core, Format::Tsv)).unwrap(), no_core);

    let rows = compute_pos_stats(&repo, &lang("eng")).unwrap();
    assert_eq!(parse_pos_report(&render_pos_report(&rows, Format::Tsv)).unwrap(), rows);
    assert!(parse_report("bad header\n").is_err());
}
