use super::logic::Logic;
use super::scheme::Scheme;
use crate::syntax::{parse, Formula};
use std::fmt;
use thiserror::Error;

/// Why a proof line holds. Line references are zero-based indices of
/// earlier lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// An instance of `scheme`; `args` optionally pins the metavariables
    /// `A`, `B`, `C` in order.
    Axiom { scheme: Scheme, args: Vec<Formula> },
    /// From `lines[minor] = A` and `lines[major] = A → B`, infer `B`.
    Mp { minor: usize, major: usize },
    /// From `A` infer `□A`.
    Nec(usize),
    /// From `A → B` infer `C ▷ A → C ▷ B`.
    R1(usize, Formula),
    /// From `A → B` infer `B ▷ C → A ▷ C`.
    R2(usize, Formula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

/// A Hilbert-style derivation; its conclusion is the last line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ProofError {
    /// One-based, as in the file format.
    pub line: usize,
    pub reason: String,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// 1. p -> p ; AX G1
    /// 2. [](p -> p) ; NEC 1
    /// 3. [](p -> p) -> p |> p ; AX J1 A=p, B=p
    /// 4. p |> p ; MP 2 3
    /// ```
    ///
    /// Each line is `N. formula ; justification` where the justification is
    /// one of `AX scheme [A=f, B=f, C=f]`, `MP i j` (line `j` is
    /// `line i → this line`), `NEC i`, `R1 i C=f` or `R2 i C=f`. Line numbers
    /// start at 1 and must be consecutive. Blank lines and lines starting
    /// with `//` are ignored.
    pub fn parse(text: &str) -> Result<Proof, ProofError> {
        let mut lines = Vec::new();
        let content = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with("//")
        });
        for (src_line, raw) in content {
            let n = lines.len() + 1;
            let err = |reason: String| ProofError { line: n, reason: format!("{reason} (text line {})", src_line + 1) };
            let (num, rest) =
                raw.trim().split_once('.').ok_or_else(|| err("expected `N. formula ; justification`".into()))?;
            if num.trim().parse::<usize>() != Ok(n) {
                return Err(err(format!("expected line number {n}, found `{}`", num.trim())));
            }
            let (formula, just) =
                rest.rsplit_once(';').ok_or_else(|| err("missing `;` before the justification".into()))?;
            let formula = parse(formula.trim()).map_err(|e| err(format!("formula: {e}")))?;
            let justification = parse_justification(just.trim(), n).map_err(err)?;
            lines.push(ProofLine { formula, justification });
        }
        Ok(Proof { lines })
    }
}

fn parse_justification(s: &str, n: usize) -> Result<Justification, String> {
    let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let rest = rest.trim();
    let line_ref = |t: &str| -> Result<usize, String> {
        match t.parse::<usize>() {
            Ok(i) if i >= 1 && i < n => Ok(i - 1),
            _ => Err(format!("`{t}` is not the number of an earlier line")),
        }
    };
    let named = |t: &str, name: char| -> Result<Formula, String> {
        let (k, v) = t.split_once('=').ok_or_else(|| format!("expected `{name}=formula`, found `{t}`"))?;
        if k.trim() != name.to_string() {
            return Err(format!("expected `{name}=formula`, found `{t}`"));
        }
        parse(v.trim()).map_err(|e| format!("argument {name}: {e}"))
    };
    match head {
        "AX" => {
            let (name, args) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let scheme: Scheme = name.parse().map_err(|e| format!("{e}"))?;
            let args = args
                .split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .zip(['A', 'B', 'C'])
                .map(|(a, m)| named(a, m))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Justification::Axiom { scheme, args })
        }
        "MP" => {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                [i, j] => Ok(Justification::Mp { minor: line_ref(i)?, major: line_ref(j)? }),
                _ => Err("MP takes two line numbers".into()),
            }
        }
        "NEC" => Ok(Justification::Nec(line_ref(rest)?)),
        "R1" | "R2" => {
            let (i, c) = rest.split_once(char::is_whitespace).ok_or("expected `R1 i C=formula`")?;
            let (i, c) = (line_ref(i)?, named(c.trim(), 'C')?);
            Ok(if head == "R1" { Justification::R1(i, c) } else { Justification::R2(i, c) })
        }
        _ => Err(format!("unknown justification `{head}`; expected AX, MP, NEC, R1 or R2")),
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { scheme, args } => {
                write!(f, "AX {scheme}")?;
                for (i, (a, m)) in args.iter().zip(['A', 'B', 'C']).enumerate() {
                    write!(f, "{}{m}={a}", if i == 0 { " " } else { ", " })?;
                }
                Ok(())
            }
            Justification::Mp { minor, major } => write!(f, "MP {} {}", minor + 1, major + 1),
            Justification::Nec(i) => write!(f, "NEC {}", i + 1),
            Justification::R1(i, c) => write!(f, "R1 {} C={c}", i + 1),
            Justification::R2(i, c) => write!(f, "R2 {} C={c}", i + 1),
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, l.formula, l.justification)?;
        }
        Ok(())
    }
}

/// Checks every line of `proof` in `logic` and returns the conclusion.
pub fn check_proof(logic: &Logic, proof: &Proof) -> Result<Formula, ProofError> {
    for (k, line) in proof.lines.iter().enumerate() {
        check_line(logic, &proof.lines[..k], line).map_err(|reason| ProofError { line: k + 1, reason })?;
    }
    proof.conclusion().cloned().ok_or(ProofError { line: 0, reason: "empty proof".into() })
}

fn check_line(logic: &Logic, earlier: &[ProofLine], line: &ProofLine) -> Result<(), String> {
    let f = &line.formula;
    let get = |i: usize| -> Result<&Formula, String> {
        earlier
            .get(i)
            .map(|l| &l.formula)
            .ok_or_else(|| format!("reference to line {} which does not precede it", i + 1))
    };
    let implication = |i: usize| -> Result<(&Formula, &Formula), String> {
        match get(i)? {
            Formula::Imp(a, b) => Ok((a, b)),
            g => Err(format!("line {} is `{g}`, not an implication", i + 1)),
        }
    };
    match &line.justification {
        Justification::Axiom { scheme, args } => {
            if !logic.has_axiom(*scheme) {
                return Err(format!("{scheme} is not an axiom of {logic}"));
            }
            if args.is_empty() || *scheme == Scheme::G1 {
                if scheme.is_instance(f) {
                    Ok(())
                } else if *scheme == Scheme::G1 {
                    Err(format!("`{f}` is not a propositional tautology"))
                } else {
                    Err(format!("`{f}` is not an instance of {scheme}"))
                }
            } else {
                match scheme.instance(args) {
                    Some(inst) if &inst == f => Ok(()),
                    Some(inst) => Err(format!("the {scheme} instance with these arguments is `{inst}`, not `{f}`")),
                    None => Err(format!("{scheme} needs {} arguments", scheme.metavariables().len())),
                }
            }
        }
        Justification::Mp { minor, major } => {
            let (a, b) = implication(*major)?;
            if a != get(*minor)? {
                Err(format!("MP: line {} is not the antecedent of line {}", minor + 1, major + 1))
            } else if b != f {
                Err(format!("MP: line {} concludes `{b}`, not `{f}`", major + 1))
            } else {
                Ok(())
            }
        }
        Justification::Nec(i) => {
            let expect = Formula::boxed(get(*i)?.clone());
            if &expect == f {
                Ok(())
            } else {
                Err(format!("NEC of line {} gives `{expect}`", i + 1))
            }
        }
        Justification::R1(i, c) | Justification::R2(i, c) => {
            if !logic.has_monotonicity_rules() {
                return Err(format!("{logic} does not have the rules R1 and R2"));
            }
            let (a, b) = implication(*i)?;
            let (a, b) = (a.clone(), b.clone());
            let expect = match line.justification {
                Justification::R1(..) => Formula::imp(Formula::rhd(c.clone(), a), Formula::rhd(c.clone(), b)),
                _ => Formula::imp(Formula::rhd(b, c.clone()), Formula::rhd(a, c.clone())),
            };
            if &expect == f {
                Ok(())
            } else {
                Err(format!("this rule applied to line {} gives `{expect}`", i + 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const J1_PRIME: &str = "\
1. p -> p ; AX G1
2. [](p -> p) ; NEC 1
3. [](p -> p) -> p |> p ; AX J1 A=p, B=p
4. p |> p ; MP 2 3
";

    #[test]
    fn checks_and_prints_the_file_format() {
        let proof = Proof::parse(J1_PRIME).unwrap();
        let l = Logic::by_name("IL-(J1)").unwrap();
        assert_eq!(check_proof(&l, &proof).unwrap(), parse("p |> p").unwrap());
        assert_eq!(proof.to_string(), J1_PRIME);
    }

    #[test]
    fn rejects_with_the_failing_line() {
        let proof = Proof::parse(J1_PRIME).unwrap();
        let e = check_proof(&Logic::il_minus(), &proof).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.reason.contains("not an axiom"), "{e}");

        let bad = J1_PRIME.replace("MP 2 3", "MP 1 3");
        let e = check_proof(&Logic::by_name("IL-(J1)").unwrap(), &Proof::parse(&bad).unwrap()).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn monotonicity_rules() {
        let text = "1. p & q -> p ; AX G1\n2. r |> p & q -> r |> p ; R1 1 C=r\n3. p |> r -> p & q |> r ; R2 1 C=r\n";
        let proof = Proof::parse(text).unwrap();
        assert!(check_proof(&Logic::il_minus(), &proof).is_ok());
        let bare = Logic::bare("GL", &[Scheme::G1, Scheme::G2, Scheme::G3]);
        assert_eq!(check_proof(&bare, &proof).unwrap_err().line, 2);
    }

    #[test]
    fn malformed_files() {
        assert!(Proof::parse("2. p ; AX G1").unwrap_err().reason.contains("expected line number 1"));
        assert!(Proof::parse("1. p -> p ; MP 1 1").is_err());
        assert!(Proof::parse("1. p -> p ; AX J9").unwrap_err().reason.contains("unknown axiom scheme"));
        assert!(Proof::parse("1. p -> p").is_err());
    }
}
