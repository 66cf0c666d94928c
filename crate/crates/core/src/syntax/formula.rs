use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A formula of the modal language with `□` and the binary modality `▷`.
///
/// `◊A` has no node of its own: it is always represented as `¬□¬A`, so
/// two formulas are equal exactly when their trees are.
///
/// Formulas are totally ordered: first by [`Formula::size`], then
/// structurally (connective, then operands left to right). Every proper
/// subformula therefore precedes the formulas it occurs in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Top,
    Var(String),
    Neg(Box<Formula>),
    Box(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Rhd(Box<Formula>, Box<Formula>),
}

use Formula::{And, Bot, Imp, Neg, Or, Rhd, Top, Var};

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Var(name.into())
    }

    pub fn not(a: Formula) -> Formula {
        Neg(Box::new(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    /// `◊a`, stored as `¬□¬a`.
    pub fn dia(a: Formula) -> Formula {
        Formula::not(Formula::boxed(Formula::not(a)))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Imp(Box::new(a), Box::new(b))
    }

    pub fn rhd(a: Formula, b: Formula) -> Formula {
        Rhd(Box::new(a), Box::new(b))
    }

    /// `(a → b) ∧ (b → a)`; the language has no primitive biconditional.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Left-nested disjunction; the empty disjunction is `⊥`.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Bot)
    }

    /// Left-nested conjunction; the empty conjunction is `⊤`.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Top)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Bot | Top | Var(_) => 1,
            Neg(a) | Formula::Box(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Imp(a, b) | Rhd(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth of all connectives; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Bot | Top | Var(_) => 0,
            Neg(a) | Formula::Box(a) => 1 + a.depth(),
            And(a, b) | Or(a, b) | Imp(a, b) | Rhd(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        let (a, b) = match self {
            Bot | Top | Var(_) => (None, None),
            Neg(a) | Formula::Box(a) => (Some(&**a), None),
            And(a, b) | Or(a, b) | Imp(a, b) | Rhd(a, b) => (Some(&**a), Some(&**b)),
        };
        a.into_iter().chain(b)
    }

    /// All subformulas, the formula itself included.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for c in self.children() {
                c.collect_subformulas(out);
            }
        }
    }

    /// Propositional variables occurring in the formula.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Var(v) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Operands of every `▷` occurring in the formula.
    pub fn rhd_operands(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Rhd(a, b) = f {
                out.insert((**a).clone());
                out.insert((**b).clone());
            }
        });
        out
    }

    /// Whether `▷` occurs anywhere in the formula.
    pub fn has_rhd(&self) -> bool {
        match self {
            Rhd(..) => true,
            _ => self.children().any(Formula::has_rhd),
        }
    }

    /// Formal negation: strips a leading `¬` instead of stacking another.
    pub fn simneg(&self) -> Formula {
        match self {
            Neg(a) => (**a).clone(),
            _ => Formula::not(self.clone()),
        }
    }

    /// Simultaneous substitution of formulas for variables.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Bot | Top => self.clone(),
            Neg(a) => Formula::not(a.substitute(map)),
            Formula::Box(a) => Formula::boxed(a.substitute(map)),
            And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Imp(a, b) => Formula::imp(a.substitute(map), b.substitute(map)),
            Rhd(a, b) => Formula::rhd(a.substitute(map), b.substitute(map)),
        }
    }

    /// If this is `¬□¬a`, returns `a`.
    pub fn as_dia(&self) -> Option<&Formula> {
        match self {
            Neg(a) => match &**a {
                Formula::Box(b) => match &**b {
                    Neg(c) => Some(c),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Bot => 0,
            Top => 1,
            Var(_) => 2,
            Neg(_) => 3,
            Formula::Box(_) => 4,
            And(..) => 5,
            Or(..) => 6,
            Imp(..) => 7,
            Rhd(..) => 8,
        }
    }

    fn structural_cmp(&self, other: &Formula) -> Ordering {
        match (self, other) {
            (Var(a), Var(b)) => a.cmp(b),
            (Neg(a), Neg(b)) | (Formula::Box(a), Formula::Box(b)) => a.cmp(b),
            (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Imp(a, b), Imp(c, d)) | (Rhd(a, b), Rhd(c, d)) => {
                a.cmp(c).then_with(|| b.cmp(d))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }

    /// Renders with Unicode connectives instead of the ASCII defaults.
    pub fn unicode(&self) -> Unicode<'_> {
        Unicode(self)
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Formula) -> Ordering {
        if std::ptr::eq(self, other) {
            return Ordering::Equal;
        }
        self.size().cmp(&other.size()).then_with(|| self.structural_cmp(other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Formula) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Binding strength of the binary connectives; prefix operators bind
/// tighter than all of them.
const IMP: u8 = 1;
const RHD: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;

struct Symbols {
    top: &'static str,
    bot: &'static str,
    not: &'static str,
    boxed: &'static str,
    dia: &'static str,
    and: &'static str,
    or: &'static str,
    imp: &'static str,
    rhd: &'static str,
}

const ASCII: Symbols = Symbols {
    top: "top",
    bot: "bot",
    not: "~",
    boxed: "[]",
    dia: "<>",
    and: " & ",
    or: " | ",
    imp: " -> ",
    rhd: " |> ",
};

const UNICODE: Symbols =
    Symbols {
        top: "⊤", bot: "⊥", not: "¬", boxed: "□", dia: "◊", and: " ∧ ", or: " ∨ ", imp: " → ", rhd: " ▷ "
    };

fn write(f: &Formula, ctx: u8, sym: &Symbols, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (prec, left, right, op) = match f {
        Bot => return out.write_str(sym.bot),
        Top => return out.write_str(sym.top),
        Var(v) => return out.write_str(v),
        Neg(_) | Formula::Box(_) => {
            let (op, arg) = match (f.as_dia(), f) {
                (Some(a), _) => (sym.dia, a),
                (None, Neg(a)) => (sym.not, &**a),
                (None, Formula::Box(a)) => (sym.boxed, &**a),
                _ => unreachable!(),
            };
            out.write_str(op)?;
            return write(arg, PREFIX, sym, out);
        }
        // Implication is right-associative, conjunction and disjunction
        // are left-associative, and `▷` does not associate at all.
        Imp(a, b) => (IMP, (a, IMP + 1), (b, IMP), sym.imp),
        Rhd(a, b) => (RHD, (a, RHD + 1), (b, RHD + 1), sym.rhd),
        Or(a, b) => (OR, (a, OR), (b, OR + 1), sym.or),
        And(a, b) => (AND, (a, AND), (b, AND + 1), sym.and),
    };
    let paren = prec < ctx;
    if paren {
        out.write_str("(")?;
    }
    write(left.0, left.1, sym, out)?;
    out.write_str(op)?;
    write(right.0, right.1, sym, out)?;
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    /// ASCII concrete syntax with minimal parentheses; the output parses
    /// back to the same formula.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self, 0, &ASCII, f)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

pub struct Unicode<'a>(&'a Formula);

impl fmt::Display for Unicode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self.0, 0, &UNICODE, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }
    fn q() -> Formula {
        Formula::var("q")
    }
    fn r() -> Formula {
        Formula::var("r")
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        let f = Formula::imp(Formula::rhd(p(), q()), Formula::dia(r()));
        assert_eq!(f.to_string(), "p |> q -> <>r");
        let g = Formula::rhd(Formula::imp(p(), q()), r());
        assert_eq!(g.to_string(), "(p -> q) |> r");
        let h = Formula::imp(Formula::imp(p(), q()), r());
        assert_eq!(h.to_string(), "(p -> q) -> r");
        let k = Formula::and(p(), Formula::and(q(), r()));
        assert_eq!(k.to_string(), "p & (q & r)");
        let nested = Formula::rhd(Formula::rhd(p(), q()), r());
        assert_eq!(nested.to_string(), "(p |> q) |> r");
        assert_eq!(Formula::not(Formula::boxed(p())).to_string(), "~[]p");
        assert_eq!(Formula::dia(Formula::and(p(), q())).unicode().to_string(), "◊(p ∧ q)");
    }

    #[test]
    fn simneg_strips_one_negation() {
        assert_eq!(Formula::not(p()).simneg(), p());
        assert_eq!(p().simneg(), Formula::not(p()));
        assert_eq!(Formula::dia(p()).simneg(), Formula::boxed(Formula::not(p())));
    }

    #[test]
    fn order_puts_subformulas_first() {
        let f = Formula::rhd(Formula::Bot, Formula::Bot);
        assert!(Formula::Bot < f);
        assert!(Formula::Bot < Formula::Top && Formula::Top < p());
        assert!(p() < q());
        let mut v = vec![Formula::boxed(p()), Formula::not(p()), p()];
        v.sort();
        assert_eq!(v, vec![p(), Formula::not(p()), Formula::boxed(p())]);
    }

    #[test]
    fn rhd_operands_collects_both_sides() {
        let f = Formula::imp(Formula::rhd(p(), Formula::or(q(), r())), Formula::rhd(q(), r()));
        let ops: Vec<_> = f.rhd_operands().into_iter().collect();
        assert_eq!(ops, vec![p(), q(), r(), Formula::or(q(), r())]);
    }
}
