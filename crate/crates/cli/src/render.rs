//! Human-readable report rendering. The JSON form is the contract; these
//! tables are cosmetic.

use solmut::engine::GenerationReport;
use solmut::regen::RegenReport;
use solmut::score::ScoreReport;
use solmut::{OperatorClass, OperatorId};

pub fn operator_table(class_filter: Option<OperatorClass>) -> String {
    let mut out = String::new();
    for class in OperatorClass::ALL {
        if class_filter.is_some_and(|c| c != class) {
            continue;
        }
        let ops = OperatorId::by_class(class);
        out.push_str(&format!("{} ({})\n", class.name(), ops.len()));
        for op in ops {
            out.push_str(&format!("  {:<8} {}\n", op.code(), op.description()));
        }
    }
    out
}

pub fn generation_summary(report: &GenerationReport) -> String {
    let mut out = format!(
        "{}: {} mutants (valid {}, invalid {}, redundant {}){}\n",
        report.source,
        report.counts.total,
        report.counts.valid,
        report.counts.invalid,
        report.counts.redundant,
        if report.approximate_validity {
            " [validity approximated: no compiler configured]"
        } else {
            ""
        }
    );
    for (code, c) in &report.per_operator {
        out.push_str(&format!(
            "  {:<8} total {:<4} valid {:<4} invalid {:<4} redundant {}\n",
            code, c.total, c.valid, c.invalid, c.redundant
        ));
    }
    out
}

pub fn score_summary(report: &ScoreReport) -> String {
    let mut out = format!(
        "valid mutants: {}  killed: {}  survived: {}  errored: {}\n",
        report.total_valid, report.killed, report.survived, report.errored
    );
    match report.mutation_score {
        Some(s) => out.push_str(&format!("mutation score: {s:.4}\n")),
        None => out.push_str(&format!(
            "mutation score: undefined ({})\n",
            report.note.as_deref().unwrap_or("no countable outcomes")
        )),
    }
    if !report.surviving.is_empty() {
        out.push_str("surviving mutants (no test killed them):\n");
        for id in &report.surviving {
            out.push_str(&format!("  {id}\n"));
        }
    }
    out
}

pub fn regen_table(report: &RegenReport) -> String {
    let mut out = format!(
        "reproduced {}/{} pairs\n",
        report.reproduced_count, report.pair_count
    );
    let name_w = report
        .pairs
        .iter()
        .map(|p| p.name.len())
        .max()
        .unwrap_or(4)
        .max(4);
    let class_w = report
        .pairs
        .iter()
        .map(|p| p.class.len())
        .max()
        .unwrap_or(5)
        .max(5);
    out.push_str(&format!(
        "{:<name_w$}  {:<class_w$}  {:<12}  operators\n",
        "pair", "class", "reproduced?"
    ));
    for p in &report.pairs {
        let ops: Vec<&str> = p.matching_operators.iter().map(|o| o.code()).collect();
        let status = match (&p.error, p.reproduced) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => "yes".to_string(),
            (None, false) => "no".to_string(),
        };
        out.push_str(&format!(
            "{:<name_w$}  {:<class_w$}  {:<12}  {}\n",
            p.name,
            p.class,
            status,
            ops.join(", ")
        ));
    }
    out
}
