use std::collections::HashMap;
use std::fmt::Write as _;

use super::EvalError;

/// Solve times of slices (rows) on problems (columns); `None` means unsolved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalMatrix {
    pub slices: Vec<String>,
    pub problems: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl EvalMatrix {
    pub fn new(slices: Vec<String>, problems: Vec<String>) -> EvalMatrix {
        let cells = vec![vec![None; problems.len()]; slices.len()];
        EvalMatrix { slices, problems, cells }
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty() || self.problems.is_empty()
    }

    pub fn slice_index(&self, id: &str) -> Option<usize> {
        self.slices.iter().position(|s| s == id)
    }

    pub fn problem_index(&self, name: &str) -> Option<usize> {
        self.problems.iter().position(|p| p == name)
    }

    pub fn get(&self, slice: usize, problem: usize) -> Option<f64> {
        self.cells[slice][problem]
    }

    pub fn set(&mut self, slice: usize, problem: usize, t: Option<f64>) {
        self.cells[slice][problem] = t;
    }

    /// Appends a row, returning its index.
    pub fn push_row(&mut self, slice: &str, times: Vec<Option<f64>>) -> usize {
        assert_eq!(times.len(), self.problems.len(), "row length");
        self.slices.push(slice.to_string());
        self.cells.push(times);
        self.slices.len() - 1
    }

    pub fn solves(&self, slice: usize, problem: usize, limit: f64) -> bool {
        self.cells[slice][problem].is_some_and(|t| t <= limit)
    }

    /// Keeps the given problem columns, in the given order.
    pub fn restrict(&self, problems: &[usize]) -> EvalMatrix {
        EvalMatrix {
            slices: self.slices.clone(),
            problems: problems.iter().map(|&p| self.problems[p].clone()).collect(),
            cells: self.cells.iter().map(|row| problems.iter().map(|&p| row[p]).collect()).collect(),
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("slice");
        for p in &self.problems {
            s.push('\t');
            s.push_str(p);
        }
        s.push('\n');
        for (id, row) in self.slices.iter().zip(&self.cells) {
            s.push_str(id);
            for c in row {
                match c {
                    Some(t) => {
                        let _ = write!(s, "\t{t:?}");
                    }
                    None => s.push_str("\t-"),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn from_tsv(text: &str) -> Result<EvalMatrix, EvalError> {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header = lines.next().ok_or(EvalError::Format { line: 1, msg: "missing header".into() })?;
        let mut cols = header.split('\t');
        cols.next();
        let problems: Vec<String> = cols.map(str::to_string).collect();
        let mut m = EvalMatrix::new(Vec::new(), problems);
        let mut seen = HashMap::new();
        for (i, line) in lines.enumerate() {
            let line_no = i + 2;
            let mut f = line.split('\t');
            let id = f.next().unwrap_or_default().to_string();
            let row: Result<Vec<Option<f64>>, EvalError> = f
                .map(|c| match c {
                    "-" => Ok(None),
                    x => x
                        .parse::<f64>()
                        .ok()
                        .filter(|t| t.is_finite() && *t >= 0.0)
                        .map(Some)
                        .ok_or(EvalError::Format { line: line_no, msg: format!("bad time `{x}`") }),
                })
                .collect();
            let row = row?;
            if row.len() != m.problems.len() {
                return Err(EvalError::Format { line: line_no, msg: "wrong number of cells".into() });
            }
            if seen.insert(id.clone(), line_no).is_some() {
                return Err(EvalError::Format { line: line_no, msg: format!("duplicate slice `{id}`") });
            }
            m.push_row(&id, row);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry {
    pub slice: String,
    pub seconds: f64,
}

/// Timed slice sequence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
    pub budget: f64,
}

/// Slice ids of the form `strategy@selector` split into their two parts;
/// an id without `@` is a bare strategy.
pub fn split_slice_id(id: &str) -> (&str, &str) {
    id.split_once('@').unwrap_or((id, "-"))
}

impl Schedule {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.seconds).sum()
    }

    pub fn slices(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.slice.as_str()).collect()
    }

    /// `# budget <s>` followed by `seconds<TAB>strategy<TAB>selector` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("# budget {:?}\n", self.budget);
        for e in &self.entries {
            let (strategy, selector) = split_slice_id(&e.slice);
            let _ = writeln!(s, "{:?}\t{strategy}\t{selector}", e.seconds);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Schedule, EvalError> {
        let mut sched = Schedule::default();
        for (i, line) in text.lines().enumerate() {
            let bad = |msg: &str| EvalError::Format { line: i + 1, msg: msg.to_string() };
            if let Some(b) = line.strip_prefix("# budget ") {
                sched.budget = b.trim().parse().map_err(|_| bad("bad budget"))?;
                continue;
            }
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(bad("expected seconds, strategy and selector"));
            }
            let seconds: f64 = f[0].parse().map_err(|_| bad("bad seconds"))?;
            let slice = if f[2] == "-" { f[1].to_string() } else { format!("{}@{}", f[1], f[2]) };
            sched.entries.push(ScheduleEntry { slice, seconds });
        }
        if sched.total() > sched.budget + 1e-9 {
            return Err(EvalError::OverBudget);
        }
        Ok(sched)
    }
}
