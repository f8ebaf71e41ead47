use crate::criticality::MotionPlanSet;
use crate::error::{Error, Result};
use crate::geometry::Configuration;

fn header(dims: usize, with_plan: bool) -> Vec<String> {
    let mut h = Vec::new();
    if with_plan {
        h.push("plan_id".to_string());
    }
    h.push("step".to_string());
    h.extend((0..dims).map(|d| format!("dim{d}")));
    h
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// Long-format plan table: `plan_id,step,dim0..dimN`, one row per waypoint.
pub fn write_plans_csv(set: &MotionPlanSet) -> Result<String> {
    let dims = set.plans.iter().flatten().map(Configuration::len).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(dims, true)).map_err(csv_err)?;
    for (id, plan) in set.plans.iter().enumerate() {
        for (step, q) in plan.iter().enumerate() {
            if q.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    actual: q.len(),
                });
            }
            let mut row = vec![id.to_string(), step.to_string()];
            row.extend(q.as_slice().iter().map(f64::to_string));
            w.write_record(row).map_err(csv_err)?;
        }
    }
    finish(w)
}

fn parse_rows(text: &str, with_plan: bool) -> Result<Vec<(usize, usize, Configuration)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let head = r.headers().map_err(csv_err)?.clone();
    let fixed = if with_plan { 2 } else { 1 };
    let dims = head.len().saturating_sub(fixed);
    let expected = header(dims, with_plan);
    if head.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Format(format!(
            "unexpected header '{}'",
            head.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = |f: &str| Error::Format(format!("row {}: bad field '{f}'", line + 2));
        let int = |i: usize| rec[i].trim().parse::<usize>().map_err(|_| bad(&rec[i]));
        let plan = if with_plan { int(0)? } else { 0 };
        let step = int(fixed - 1)?;
        let coords = (fixed..rec.len())
            .map(|i| {
                rec[i]
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(&rec[i]))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((plan, step, Configuration::new(coords)));
    }
    Ok(rows)
}

/// Reads a plan table; plans must be numbered 0.. and steps consecutive from 0.
pub fn read_plans_csv(text: &str, environment: &str) -> Result<MotionPlanSet> {
    let mut plans: Vec<Vec<Configuration>> = Vec::new();
    for (plan, step, q) in parse_rows(text, true)? {
        if plan == plans.len() {
            plans.push(Vec::new());
        } else if plan + 1 != plans.len() {
            return Err(Error::Format(format!("plan {plan} out of order")));
        }
        let p = plans.last_mut().expect("pushed above");
        if step != p.len() {
            return Err(Error::Format(format!("plan {plan}: step {step} out of order")));
        }
        p.push(q);
    }
    Ok(MotionPlanSet::new(environment, plans))
}

/// Single path as `step,dim0..dimN`.
pub fn write_path_csv(path: &[Configuration]) -> Result<String> {
    let dims = path.first().map_or(0, Configuration::len);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(dims, false)).map_err(csv_err)?;
    for (step, q) in path.iter().enumerate() {
        let mut row = vec![step.to_string()];
        row.extend(q.as_slice().iter().map(f64::to_string));
        w.write_record(row).map_err(csv_err)?;
    }
    finish(w)
}

pub fn read_path_csv(text: &str) -> Result<Vec<Configuration>> {
    let rows = parse_rows(text, false)?;
    for (i, (_, step, _)) in rows.iter().enumerate() {
        if *step != i {
            return Err(Error::Format(format!("step {step} out of order")));
        }
    }
    Ok(rows.into_iter().map(|(_, _, q)| q).collect())
}
