//! Regression vectors from the worked examples, plus the start of the
//! ordinal list. Runs in well under a second on in-memory tables.

use serde_json::json;

use laver_core::omega::{render_text, Enumerator};
use laver_core::{act_on_gamma, in_range, Error, Tower};

use crate::output::Response;
use crate::{EXIT_ERROR, EXIT_OK};

const ORDINALS_THROUGH_GAMMA_5: &str = "γ_0\nγ_1\n1\"γ_1\nγ_2\n3\"γ_1\nγ_3\n7\"γ_1\n4\"γ_3\n3\"γ_2\n2\"γ_2\n1\"γ_2\nγ_4\n15\"γ_1\n12\"γ_3\n3\"γ_3\nγ_5\n";

struct Vector {
    name: &'static str,
    expected: String,
    actual: String,
}

fn vectors(tower: &Tower) -> Result<Vec<Vector>, Error> {
    let t = |n| tower.table(n);
    let act = |a, k| {
        let r = act_on_gamma(a, k, tower);
        if r.certified {
            r.value.to_string()
        } else {
            format!(">= {}", r.value)
        }
    };
    let mut v = vec![
        Vector {
            name: "A_5: 5 * 1",
            expected: "6".into(),
            actual: t(5)?.apply(5, 1)?.to_string(),
        },
        Vector {
            name: "A_5: t_5(5)",
            expected: "2".into(),
            actual: t(5)?.threshold(5)?.to_string(),
        },
        Vector {
            name: "γ_5 in range(6)",
            expected: "false".into(),
            actual: in_range(6, 5, tower)?.to_string(),
        },
        Vector {
            name: "A_10: t_10(34)",
            expected: "5".into(),
            actual: t(10)?.threshold(34)?.to_string(),
        },
        Vector {
            name: "A_9: 34 o 4",
            expected: "242".into(),
            actual: t(9)?.compose(34, 4)?.to_string(),
        },
        Vector {
            name: "γ_9 in range(242)",
            expected: "false".into(),
            actual: in_range(242, 9, tower)?.to_string(),
        },
        Vector {
            name: "A_9: 48 * 51",
            expected: "243".into(),
            actual: t(9)?.apply(48, 51)?.to_string(),
        },
        Vector {
            name: "A_9: 192 * 51",
            expected: "243".into(),
            actual: t(9)?.apply(192, 51)?.to_string(),
        },
        Vector {
            name: "48 γ_7",
            expected: "γ_9".into(),
            actual: act(48, 7),
        },
        Vector {
            name: "192 γ_7",
            expected: "γ_9".into(),
            actual: act(192, 7),
        },
        Vector {
            name: "51 γ_3",
            expected: "γ_7".into(),
            actual: act(51, 3),
        },
    ];
    let mut en = Enumerator::new(tower);
    v.push(Vector {
        name: "ordinals through γ_5",
        expected: ORDINALS_THROUGH_GAMMA_5.into(),
        actual: {
            let mut list = en.enumerate_below(5)?;
            list.push(laver_core::OrdinalRep::crit(5));
            render_text(&list)
        },
    });
    Ok(v)
}

pub(crate) fn run() -> Result<Response, Error> {
    let tower = Tower::build(11)?;
    let vs = vectors(&tower)?;
    let mut text = String::new();
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut failed = 0;
    for v in &vs {
        let ok = v.expected == v.actual;
        failed += usize::from(!ok);
        if ok {
            text.push_str(&format!("ok    {}\n", v.name));
        } else {
            text.push_str(&format!(
                "FAIL  {}: expected {:?}, got {:?}\n",
                v.name, v.expected, v.actual
            ));
        }
        records
            .push(json!({"name": v.name, "expected": v.expected, "actual": v.actual, "pass": ok}));
        rows.push(vec![v.name.to_string(), ok.to_string()]);
    }
    text.push_str(&format!(
        "{} of {} vectors passed\n",
        vs.len() - failed,
        vs.len()
    ));
    let mut resp = Response::new(
        json!({"vectors": records, "passed": vs.len() - failed, "total": vs.len()}),
        text,
    )
    .csv(vec!["name", "pass"], rows);
    resp.exit = if failed == 0 { EXIT_OK } else { EXIT_ERROR };
    Ok(resp)
}
