//! Macro-averaged classification metrics and one-vs-rest ROC AUC.

use mixaug::metrics::{compute_metrics, confusion, parse_predictions};

const PREDICTIONS: &str = "\
# true_class, score_0, score_1, score_2
0, 0.8, 0.1, 0.1
0, 0.5, 0.4, 0.1
1, 0.2, 0.7, 0.1
1, 0.6, 0.3, 0.1
2, 0.1, 0.2, 0.7
2, 0.3, 0.3, 0.4
";

fn main() -> mixaug::Result<()> {
    let records = parse_predictions(PREDICTIONS, std::path::Path::new("inline"))?;
    for (c, counts) in confusion(&records)?.iter().enumerate() {
        println!("class {c}: {counts:?}");
    }
    print!("{}", compute_metrics(&records)?);
    Ok(())
}
