use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn precedence(self) -> u8 {
        match self {
            Self::Add | Self::Sub => 1,
            Self::Mul | Self::Div => 2,
            Self::Pow => 4,
        }
    }

    fn symbol(self) -> char {
        match self {
            Self::Add => '+',
            Self::Sub => '-',
            Self::Mul => '*',
            Self::Div => '/',
            Self::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Exp,
    Log,
    Sqrt,
    Abs,
    Min,
    Max,
}

impl Function {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Self::Exp,
            "log" => Self::Log,
            "sqrt" => Self::Sqrt,
            "abs" => Self::Abs,
            "min" => Self::Min,
            "max" => Self::Max,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Exp => "exp",
            Self::Log => "log",
            Self::Sqrt => "sqrt",
            Self::Abs => "abs",
            Self::Min => "min",
            Self::Max => "max",
        }
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            Self::Min | Self::Max => n >= 2,
            _ => n == 1,
        }
    }
}

/// Expression tree over named real variables.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Number(f64),
    Variable(String),
    Neg(Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    Call(Function, Vec<Expression>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{function} of {argument} is undefined")]
    Domain { function: &'static str, argument: f64 },
    #[error("non-integer power {exponent} of negative base {base}")]
    NegativeBase { base: f64, exponent: f64 },
    #[error("non-finite intermediate value")]
    NonFinite,
}

/// Parses `text` with the usual precedence: `^` (right-associative) binds
/// tighter than unary minus, which binds tighter than `*` `/`, then `+` `-`.
pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let expr = parser.expression()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.eat(b'-') {
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            // the exponent may itself carry a sign: x^-2
            let exponent = self.unary()?;
            return Ok(Expression::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.error("expected a number, variable, function call or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expression, ParseError> {
        let start = self.pos;
        let src = self.src;
        let digits = |pos: &mut usize| {
            while *pos < src.len() && src[*pos].is_ascii_digit() {
                *pos += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < src.len() && src[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < src.len() && (src[self.pos] == b'e' || src[self.pos] == b'E') {
            let mut look = self.pos + 1;
            if look < src.len() && (src[look] == b'+' || src[look] == b'-') {
                look += 1;
            }
            if look < src.len() && src[look].is_ascii_digit() {
                self.pos = look;
                digits(&mut self.pos);
            }
        }
        let text = core::str::from_utf8(&src[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Expression::Number(v)),
            _ => Err(ParseError { offset: start, message: alloc::format!("invalid number `{text}`") }),
        }
    }

    fn identifier(&mut self) -> Result<Expression, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if self.peek() != Some(b'(') {
            return Ok(Expression::Variable(name.to_string()));
        }
        let function = Function::from_name(name)
            .ok_or_else(|| ParseError { offset: start, message: alloc::format!("unknown function `{name}`") })?;
        self.pos += 1;
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                args.push(self.expression()?);
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(self.error("expected `,` or `)`"));
                }
            }
        }
        if !function.arity_ok(args.len()) {
            return Err(ParseError {
                offset: start,
                message: alloc::format!("wrong number of arguments to `{}`", function.name()),
            });
        }
        Ok(Expression::Call(function, args))
    }
}

fn finite(v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

impl Expression {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_expression(text)
    }

    /// Evaluates with variables looked up in `bindings`. Every intermediate
    /// value must be finite.
    pub fn eval(&self, bindings: &[(&str, f64)]) -> Result<f64, EvalError> {
        match self {
            Self::Number(v) => Ok(*v),
            Self::Variable(name) => bindings
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| EvalError::UnboundVariable(name.clone())),
            Self::Neg(inner) => Ok(-inner.eval(bindings)?),
            Self::Binary(op, lhs, rhs) => {
                let a = lhs.eval(bindings)?;
                let b = rhs.eval(bindings)?;
                match op {
                    BinaryOp::Add => finite(a + b),
                    BinaryOp::Sub => finite(a - b),
                    BinaryOp::Mul => finite(a * b),
                    BinaryOp::Div => {
                        if b == 0.0 {
                            Err(EvalError::DivisionByZero)
                        } else {
                            finite(a / b)
                        }
                    }
                    BinaryOp::Pow => {
                        if a < 0.0 && b != math::floor(b) {
                            return Err(EvalError::NegativeBase { base: a, exponent: b });
                        }
                        if a == 0.0 && b < 0.0 {
                            return Err(EvalError::DivisionByZero);
                        }
                        finite(math::pow(a, b))
                    }
                }
            }
            Self::Call(function, args) => {
                let first = args[0].eval(bindings)?;
                match function {
                    Function::Exp => finite(math::exp(first)),
                    Function::Log => {
                        if first <= 0.0 {
                            Err(EvalError::Domain { function: "log", argument: first })
                        } else {
                            finite(math::ln(first))
                        }
                    }
                    Function::Sqrt => {
                        if first < 0.0 {
                            Err(EvalError::Domain { function: "sqrt", argument: first })
                        } else {
                            Ok(math::sqrt(first))
                        }
                    }
                    Function::Abs => Ok(math::abs(first)),
                    Function::Min | Function::Max => {
                        let mut acc = first;
                        for arg in &args[1..] {
                            let v = arg.eval(bindings)?;
                            acc = if *function == Function::Min { acc.min(v) } else { acc.max(v) };
                        }
                        Ok(acc)
                    }
                }
            }
        }
    }

    /// Names of the free variables, sorted and deduplicated.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Self::Number(_) => {}
            Self::Variable(name) => out.push(name.clone()),
            Self::Neg(inner) => inner.collect_variables(out),
            Self::Binary(_, lhs, rhs) => {
                lhs.collect_variables(out);
                rhs.collect_variables(out);
            }
            Self::Call(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    /// Replaces variables by expressions; names without a replacement stay.
    pub fn substitute(&self, replacements: &[(&str, &Expression)]) -> Expression {
        match self {
            Self::Number(_) => self.clone(),
            Self::Variable(name) => replacements
                .iter()
                .find(|(n, _)| n == name)
                .map_or_else(|| self.clone(), |(_, e)| (*e).clone()),
            Self::Neg(inner) => Self::Neg(Box::new(inner.substitute(replacements))),
            Self::Binary(op, lhs, rhs) => Self::Binary(
                *op,
                Box::new(lhs.substitute(replacements)),
                Box::new(rhs.substitute(replacements)),
            ),
            Self::Call(f, args) => Self::Call(*f, args.iter().map(|a| a.substitute(replacements)).collect()),
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, Self::Number(_) | Self::Variable(_) | Self::Call(..))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Number(v) => write!(f, "{v}"),
            Self::Variable(name) => f.write_str(name),
            Self::Neg(inner) => {
                // unary minus binds looser than `^` and tighter than `*`
                if matches!(**inner, Self::Binary(op, ..) if op != BinaryOp::Pow) {
                    write!(f, "-({inner})")
                } else {
                    write!(f, "-{inner}")
                }
            }
            Self::Binary(BinaryOp::Pow, base, exponent) => {
                if base.is_atom() {
                    write!(f, "{base}")?;
                } else {
                    write!(f, "({base})")?;
                }
                if exponent.is_atom() {
                    write!(f, "^{exponent}")
                } else {
                    write!(f, "^({exponent})")
                }
            }
            Self::Binary(op, lhs, rhs) => {
                let prec = op.precedence();
                let left_parens = matches!(**lhs, Self::Binary(inner, ..) if inner.precedence() < prec);
                let right_parens = match **rhs {
                    Self::Binary(inner, ..) => inner.precedence() <= prec,
                    Self::Neg(_) => true,
                    _ => false,
                };
                if left_parens {
                    write!(f, "({lhs})")?;
                } else {
                    write!(f, "{lhs}")?;
                }
                write!(f, " {} ", op.symbol())?;
                if right_parens {
                    write!(f, "({rhs})")
                } else {
                    write!(f, "{rhs}")
                }
            }
            Self::Call(function, args) => {
                write!(f, "{}(", function.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl core::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_expression(s)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Expression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Expression {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_expression(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use proptest::prelude::*;
    use Expression::*;

    fn var(name: &str) -> Box<Expression> {
        Box::new(Variable(name.into()))
    }

    #[test]
    fn power_node() {
        assert_eq!(
            parse_expression("x^2").unwrap(),
            Binary(BinaryOp::Pow, var("x"), Box::new(Number(2.0)))
        );
    }

    #[test]
    fn negated_exponential_of_negation() {
        assert_eq!(
            parse_expression("-exp(-x)").unwrap(),
            Neg(Box::new(Call(Function::Exp, alloc::vec![Neg(var("x"))])))
        );
    }

    #[test]
    fn double_caret_is_a_syntax_error_at_offset_two() {
        let err = parse_expression("x^^2").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn precedence_rules() {
        // -x^2 is -(x^2); 2^3^2 is 2^(3^2)
        let e = parse_expression("-x^2").unwrap();
        assert_eq!(e.eval(&[("x", 3.0)]).unwrap(), -9.0);
        assert_eq!(parse_expression("2^3^2").unwrap().eval(&[]).unwrap(), 512.0);
        assert_eq!(parse_expression("1 - 2 - 3").unwrap().eval(&[]).unwrap(), -4.0);
        assert_eq!(parse_expression("8 / 4 / 2").unwrap().eval(&[]).unwrap(), 1.0);
        assert_eq!(parse_expression("2 * -3").unwrap().eval(&[]).unwrap(), -6.0);
        assert_eq!(parse_expression("x^-1").unwrap().eval(&[("x", 4.0)]).unwrap(), 0.25);
        assert_eq!(parse_expression("min(-x, 1)").unwrap().eval(&[("x", -3.0)]).unwrap(), 1.0);
        assert_eq!(parse_expression("max(1, 2, 3.5e0)").unwrap().eval(&[]).unwrap(), 3.5);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse_expression("(x + 1").unwrap_err().offset, 6);
        assert_eq!(parse_expression("foo(x)").unwrap_err().offset, 0);
        assert_eq!(parse_expression("x 1").unwrap_err().offset, 2);
        assert!(parse_expression("exp(x, y)").is_err());
        assert!(parse_expression("min(x)").is_err());
        assert!(parse_expression("").is_err());
    }

    #[test]
    fn evaluation_examples() {
        let sq = parse_expression("x^2").unwrap();
        assert_eq!(sq.eval(&[("x", -0.5)]).unwrap(), 0.25);
        assert_eq!(parse_expression("1-x").unwrap().eval(&[("x", 1.0)]).unwrap(), 0.0);
        assert!(matches!(
            parse_expression("sqrt(y)").unwrap().eval(&[("y", -1.0)]),
            Err(EvalError::Domain { function: "sqrt", .. })
        ));
    }

    #[test]
    fn evaluation_errors() {
        let e = |s: &str, x: f64| parse_expression(s).unwrap().eval(&[("x", x)]);
        assert_eq!(e("1/x", 0.0), Err(EvalError::DivisionByZero));
        assert!(matches!(e("log(x)", 0.0), Err(EvalError::Domain { .. })));
        assert!(matches!(e("x^0.5", -1.0), Err(EvalError::NegativeBase { .. })));
        assert_eq!(e("x^3", -2.0), Ok(-8.0));
        assert_eq!(e("exp(x)", 1000.0), Err(EvalError::NonFinite));
        assert_eq!(e("y", 1.0), Err(EvalError::UnboundVariable("y".into())));
    }

    #[test]
    fn substitution_composes() {
        let outer = parse_expression("sqrt(y)").unwrap();
        let inner = parse_expression("x^2").unwrap();
        let composed = outer.substitute(&[("y", &inner)]);
        assert_eq!(composed.eval(&[("x", -0.3)]).unwrap(), 0.3);
        assert_eq!(format!("{composed}"), "sqrt(x^2)");
    }

    #[test]
    fn printing_is_readable() {
        for (src, printed) in [
            ("x^2", "x^2"),
            ("-exp(-x)", "-exp(-x)"),
            ("(a+b)*c", "(a + b) * c"),
            ("a-(b-c)", "a - (b - c)"),
            ("(-x)^2", "(-x)^2"),
            ("2^3^2", "2^(3^2)"),
            ("-(a*b)", "-(a * b)"),
        ] {
            assert_eq!(format!("{}", parse_expression(src).unwrap()), printed, "{src}");
        }
    }

    fn arb_expression() -> impl Strategy<Value = Expression> {
        let leaf = prop_oneof![
            (0u32..1000, 0u32..4).prop_map(|(m, e)| Number(m as f64 / 10f64.powi(e as i32))),
            prop_oneof![Just("x"), Just("y"), Just("z1")].prop_map(|n| Variable(n.into())),
        ];
        leaf.prop_recursive(5, 48, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinaryOp::Add),
                        Just(BinaryOp::Sub),
                        Just(BinaryOp::Mul),
                        Just(BinaryOp::Div),
                        Just(BinaryOp::Pow)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, a, b)| Binary(op, Box::new(a), Box::new(b))),
                (
                    prop_oneof![
                        Just(Function::Exp),
                        Just(Function::Log),
                        Just(Function::Sqrt),
                        Just(Function::Abs)
                    ],
                    inner.clone()
                )
                    .prop_map(|(f, a)| Call(f, alloc::vec![a])),
                proptest::collection::vec(inner, 2..4).prop_map(|args| Call(Function::Max, args)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(expr in arb_expression()) {
            let printed = format!("{expr}");
            let reparsed = parse_expression(&printed).unwrap();
            prop_assert_eq!(&reparsed, &expr);
            let again = parse_expression(&format!("{reparsed}")).unwrap();
            prop_assert_eq!(again, reparsed);
        }
    }
}
