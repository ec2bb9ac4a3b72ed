//! Automatic sequences: uniform morphisms, codings, fixed points and the
//! paperfolding family, plus substitution of a polynomial into the Laurent
//! series built from a coefficient sequence.
//!
//! Letters are dense integers `0..alphabet_size`. Coding outputs are small
//! integers which become field elements once reduced into some `F_p`.

use std::fmt;

use thiserror::Error;

use crate::ff::{PrimeField, Residue};

pub type Letter = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("paperfolding sequences are indexed from 1")]
    IndexZero,
    #[error("paperfolding level must be at least 1 and at most 7, got {0}")]
    BadLevel(u32),
    #[error("letter {0} is not the first letter of its own image")]
    NotProlongable(Letter),
    #[error("letter {letter} is outside an alphabet of size {alphabet_size}")]
    LetterOutOfRange {
        letter: Letter,
        alphabet_size: usize,
    },
    #[error("image of letter {letter} has length {got}, expected {expected}")]
    NonUniform {
        letter: Letter,
        got: usize,
        expected: usize,
    },
    #[error("morphism and coding disagree on the alphabet size ({morphism} vs {coding})")]
    AlphabetMismatch { morphism: usize, coding: usize },
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("the zero polynomial cannot be substituted")]
    ZeroPolynomial,
    #[error("need {needed} input coefficients, got {got}")]
    NotEnoughTerms { needed: usize, got: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown built-in sequence `{0}`")]
    UnknownBuiltin(String),
}

/// A uniform `k`-morphism on the alphabet `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism1D {
    k: usize,
    images: Vec<Vec<Letter>>,
}

impl Morphism1D {
    pub fn new(images: Vec<Vec<Letter>>) -> Result<Self, SeqError> {
        let k = images.first().map_or(0, Vec::len);
        let alphabet_size = images.len();
        for (letter, img) in images.iter().enumerate() {
            if img.len() != k || k == 0 {
                return Err(SeqError::NonUniform {
                    letter: letter as Letter,
                    got: img.len(),
                    expected: k.max(1),
                });
            }
            if let Some(&bad) = img.iter().find(|&&l| l as usize >= alphabet_size) {
                return Err(SeqError::LetterOutOfRange {
                    letter: bad,
                    alphabet_size,
                });
            }
        }
        Ok(Morphism1D { k, images })
    }

    /// The identity 1-morphism on `alphabet_size` letters.
    pub fn identity(alphabet_size: usize) -> Self {
        Morphism1D {
            k: 1,
            images: (0..alphabet_size as Letter).map(|l| vec![l]).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.images[letter as usize]
    }

    pub fn is_prolongable(&self, letter: Letter) -> bool {
        self.images
            .get(letter as usize)
            .is_some_and(|img| img[0] == letter)
    }

    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter()
            .flat_map(|&l| self.image(l).iter().copied())
            .collect()
    }
}

/// A uniform `d`-coding: every letter maps to a block of `d` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coding {
    d: usize,
    images: Vec<Vec<u8>>,
}

impl Coding {
    pub fn new(images: Vec<Vec<u8>>) -> Result<Self, SeqError> {
        let d = images.first().map_or(0, Vec::len);
        for (letter, img) in images.iter().enumerate() {
            if img.len() != d || d == 0 {
                return Err(SeqError::NonUniform {
                    letter: letter as Letter,
                    got: img.len(),
                    expected: d.max(1),
                });
            }
        }
        Ok(Coding { d, images })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, letter: Letter) -> &[u8] {
        &self.images[letter as usize]
    }

    /// Reduces every output symbol into `F_p`.
    pub fn reduced(&self, field: &PrimeField) -> Coding {
        Coding {
            d: self.d,
            images: self
                .images
                .iter()
                .map(|img| img.iter().map(|&v| field.reduce(v as i64)).collect())
                .collect(),
        }
    }

    /// Concatenation of the per-letter blocks.
    pub fn apply(&self, word: &[Letter]) -> Vec<u8> {
        word.iter()
            .flat_map(|&l| self.image(l).iter().copied())
            .collect()
    }
}

/// `k`-compression: the coding `letter -> coding(morphism(letter))`.
pub fn compress(morphism: &Morphism1D, coding: &Coding) -> Coding {
    Coding {
        d: coding.d * morphism.k,
        images: (0..morphism.alphabet_size() as Letter)
            .map(|l| coding.apply(morphism.image(l)))
            .collect(),
    }
}

/// A coded fixed point of a uniform morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    morphism: Morphism1D,
    coding: Coding,
    start: Letter,
    names: Vec<String>,
}

impl SequenceSpec {
    pub fn new(morphism: Morphism1D, coding: Coding, start: Letter) -> Result<Self, SeqError> {
        if morphism.alphabet_size() != coding.alphabet_size() {
            return Err(SeqError::AlphabetMismatch {
                morphism: morphism.alphabet_size(),
                coding: coding.alphabet_size(),
            });
        }
        if start as usize >= morphism.alphabet_size() {
            return Err(SeqError::LetterOutOfRange {
                letter: start,
                alphabet_size: morphism.alphabet_size(),
            });
        }
        if !morphism.is_prolongable(start) {
            return Err(SeqError::NotProlongable(start));
        }
        let names = default_names(morphism.alphabet_size());
        Ok(SequenceSpec {
            morphism,
            coding,
            start,
            names,
        })
    }

    fn with_names(mut self, names: Vec<String>) -> Self {
        debug_assert_eq!(names.len(), self.morphism.alphabet_size());
        self.names = names;
        self
    }

    pub fn morphism(&self) -> &Morphism1D {
        &self.morphism
    }

    pub fn coding(&self) -> &Coding {
        &self.coding
    }

    pub fn start(&self) -> Letter {
        self.start
    }

    pub fn letter_name(&self, letter: Letter) -> &str {
        &self.names[letter as usize]
    }

    /// Replaces the coding by its `k`-compression.
    pub fn compressed(&self) -> SequenceSpec {
        SequenceSpec {
            coding: compress(&self.morphism, &self.coding),
            ..self.clone()
        }
    }

    /// Compresses until the coding block length equals `d`.
    pub fn compressed_to(&self, d: usize) -> Option<SequenceSpec> {
        let mut spec = self.clone();
        while spec.coding.d < d {
            if spec.morphism.k < 2 {
                return None;
            }
            spec = spec.compressed();
        }
        (spec.coding.d == d).then_some(spec)
    }

    /// The first `length` letters of the fixed point.
    pub fn fixed_point_prefix(&self, length: usize) -> Vec<Letter> {
        fixed_point_prefix(&self.morphism, self.start, length)
            .expect("start letter validated at construction")
    }

    /// The first `length` symbols of the coded sequence, reduced into `F_p`.
    pub fn coded_prefix(&self, field: &PrimeField, length: usize) -> Vec<Residue> {
        let d = self.coding.d;
        let letters = self.fixed_point_prefix(length.div_ceil(d));
        let mut out = self.coding.reduced(field).apply(&letters);
        out.truncate(length);
        out
    }

    /// Parses the plain-text morphism format.
    ///
    /// One rule per line: `NAME -> IMG1 IMG2 ... : C1 C2 ...`, where the
    /// image is a list of letter names and the coding a list of small
    /// integers. Blank lines and `#` comments are ignored. The start letter is
    /// the first rule's letter unless a `start NAME` line says otherwise.
    pub fn parse(text: &str) -> Result<SequenceSpec, SeqError> {
        let mut names: Vec<String> = Vec::new();
        let mut rules: Vec<(usize, Vec<String>, Vec<u8>)> = Vec::new();
        let mut start: Option<(usize, String)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| SeqError::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("start ") {
                start = Some((line_no, rest.trim().to_string()));
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| err("expected `->`"))?;
            let (image, code) = rhs.split_once(':').ok_or_else(|| err("expected `:`"))?;
            let name = lhs.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(err("letter name must be a single token"));
            }
            if names.iter().any(|n| n == name) {
                return Err(err("letter defined twice"));
            }
            names.push(name.to_string());
            let image: Vec<String> = image.split_whitespace().map(str::to_string).collect();
            let code = code
                .split_whitespace()
                .map(|t| {
                    t.parse::<u8>()
                        .map_err(|_| err("coding values must be integers 0..=255"))
                })
                .collect::<Result<Vec<u8>, _>>()?;
            rules.push((line_no, image, code));
        }
        if names.is_empty() {
            return Err(SeqError::Parse {
                line: 0,
                msg: "no rules".into(),
            });
        }
        let lookup = |line: usize, n: &str| {
            names
                .iter()
                .position(|x| x == n)
                .map(|i| i as Letter)
                .ok_or_else(|| SeqError::Parse {
                    line,
                    msg: format!("undefined letter `{n}`"),
                })
        };
        let mut images = Vec::with_capacity(rules.len());
        let mut codes = Vec::with_capacity(rules.len());
        for (line, image, code) in rules {
            images.push(
                image
                    .iter()
                    .map(|n| lookup(line, n))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            codes.push(code);
        }
        let start = match start {
            Some((line, n)) => lookup(line, &n)?,
            None => 0,
        };
        Ok(
            SequenceSpec::new(Morphism1D::new(images)?, Coding::new(codes)?, start)?
                .with_names(names),
        )
    }

    /// Built-in specs: `pf1`, `pf2` and `thue-morse`.
    pub fn builtin(name: &str) -> Result<SequenceSpec, SeqError> {
        match name {
            "pf1" => Ok(paperfolding_level1()),
            "pf2" => Ok(paperfolding_level2()),
            "thue-morse" => Ok(thue_morse()),
            other => Err(SeqError::UnknownBuiltin(other.to_string())),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.morphism.alphabet_size() as Letter {
            write!(f, "{} ->", self.letter_name(l))?;
            for &x in self.morphism.image(l) {
                write!(f, " {}", self.letter_name(x))?;
            }
            write!(f, " :")?;
            for v in self.coding.image(l) {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        if self.start != 0 {
            writeln!(f, "start {}", self.letter_name(self.start))?;
        }
        Ok(())
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if n <= 26 {
                ((b'A' + i as u8) as char).to_string()
            } else {
                format!("L{i}")
            }
        })
        .collect()
}

fn parse_letters(word: &str) -> Vec<Letter> {
    word.bytes().map(|b| (b - b'A') as Letter).collect()
}

/// The first-level paperfolding sequence as `pi(psi^w(A))`.
pub fn paperfolding_level1() -> SequenceSpec {
    let psi =
        Morphism1D::new(["AB", "CB", "AD", "CD"].map(parse_letters).to_vec()).expect("well-formed");
    let pi = Coding::new(vec![vec![0], vec![0], vec![1], vec![1]]).expect("well-formed");
    SequenceSpec::new(psi, pi, 0).expect("A is prolongable")
}

/// The second-level paperfolding sequence as `upsilon(chi^w(A))`.
pub fn paperfolding_level2() -> SequenceSpec {
    let chi = Morphism1D::new(
        [
            "AB", "CD", "EF", "GD", "AH", "CI", "EJ", "CK", "GI", "CL", "GK", "GL",
        ]
        .map(parse_letters)
        .to_vec(),
    )
    .expect("well-formed");
    let upsilon = Coding::new(
        [0, 0, 1, 0, 2, 1, 3, 2, 1, 3, 2, 3]
            .map(|v| vec![v])
            .to_vec(),
    )
    .expect("well-formed");
    SequenceSpec::new(chi, upsilon, 0).expect("A is prolongable")
}

/// Thue-Morse: `0 -> 01`, `1 -> 10`, identity coding.
pub fn thue_morse() -> SequenceSpec {
    let m = Morphism1D::new(vec![vec![0, 1], vec![1, 0]]).expect("well-formed");
    let c = Coding::new(vec![vec![0], vec![1]]).expect("well-formed");
    SequenceSpec::new(m, c, 0)
        .expect("0 is prolongable")
        .with_names(vec!["0".into(), "1".into()])
}

/// The first `length` letters of `morphism^w(start)`.
///
/// The buffer is expanded in place: since the fixed point is a prefix of its
/// own image, each pass only needs to expand the letters that will survive
/// truncation.
pub fn fixed_point_prefix(
    morphism: &Morphism1D,
    start: Letter,
    length: usize,
) -> Result<Vec<Letter>, SeqError> {
    if !morphism.is_prolongable(start) {
        return Err(SeqError::NotProlongable(start));
    }
    let mut buf = vec![start];
    if morphism.k() == 1 {
        buf.resize(length, start);
        return Ok(buf);
    }
    while buf.len() < length {
        let keep = length.div_ceil(morphism.k()).min(buf.len());
        let mut next = Vec::with_capacity((keep * morphism.k()).min(length));
        for &l in &buf[..keep] {
            next.extend_from_slice(morphism.image(l));
            if next.len() >= length {
                break;
            }
        }
        buf = next;
    }
    buf.truncate(length);
    Ok(buf)
}

/// The `i`-th letter (0-based) of `morphism^w(start)`, read off the base-`k`
/// digits of `i`.
pub fn fixed_point_letter(morphism: &Morphism1D, start: Letter, i: u64) -> Letter {
    let k = morphism.k() as u64;
    if k == 1 {
        return start;
    }
    let mut digits = Vec::new();
    let mut rest = i;
    while rest > 0 {
        digits.push((rest % k) as usize);
        rest /= k;
    }
    digits
        .iter()
        .rev()
        .fold(start, |letter, &d| morphism.image(letter)[d])
}

/// The `n`-th level paperfolding sequence at 1-based index `i`.
pub fn paperfolding(level: u32, i: u64) -> Result<u64, SeqError> {
    if !(1..=7).contains(&level) {
        return Err(SeqError::BadLevel(level));
    }
    if i == 0 {
        return Err(SeqError::IndexZero);
    }
    let odd = i >> i.trailing_zeros();
    let modulus = 1u64 << (level + 1);
    Ok(((odd % modulus) - 1) / 2)
}

/// A polynomial over `F_p`, lowest degree coefficient first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Residue>,
}

impl Poly {
    pub fn new(field: &PrimeField, coeffs: &[i64]) -> Result<Self, SeqError> {
        let mut coeffs: Vec<Residue> = coeffs.iter().map(|&c| field.reduce(c)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(SeqError::ZeroPolynomial);
        }
        Ok(Poly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Residue] {
        &self.coeffs
    }
}

/// Coefficients `c_1..c_N` of `t^-1..t^-N` in `sum_i a_i p(t)^-i`.
///
/// Irreducibility of `p(t)` is not checked.
pub fn laurent_substitute(
    field: &PrimeField,
    a: &[Residue],
    poly: &Poly,
    n: usize,
) -> Result<Vec<Residue>, SeqError> {
    let m = poly.degree();
    if m == 0 {
        return Err(SeqError::DegreeZero);
    }
    let terms = n / m;
    if a.len() < terms {
        return Err(SeqError::NotEnoughTerms {
            needed: terms,
            got: a.len(),
        });
    }
    // With u = 1/t, p(t) = t^m q(u) where q(u) = sum_d p_{m-d} u^d and
    // q(0) = lead != 0, so 1/p(t) = u^m / q(u) is a power series in u.
    let q: Vec<Residue> = poly.coeffs.iter().rev().copied().collect();
    let inv_q = power_series_inverse(field, &q, n + 1);
    let mut x = vec![0; n + 1];
    for (d, &c) in inv_q.iter().enumerate() {
        if d + m <= n {
            x[d + m] = c;
        }
    }
    // Horner: a_1 x + a_2 x^2 + ... = x (a_1 + x (a_2 + ...)).
    let mut acc = vec![0; n + 1];
    for &ai in a[..terms].iter().rev() {
        acc[0] = field.add(acc[0], ai);
        acc = series_mul(field, &acc, &x, n + 1);
    }
    Ok(acc[1..].to_vec())
}

fn series_mul(field: &PrimeField, a: &[Residue], b: &[Residue], len: usize) -> Vec<Residue> {
    let mut out = vec![0; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] = field.add(out[i + j], field.mul(ai, bj));
        }
    }
    out
}

fn power_series_inverse(field: &PrimeField, q: &[Residue], len: usize) -> Vec<Residue> {
    let inv0 = field.inv(q[0]).expect("leading coefficient is nonzero");
    let mut out = vec![0; len];
    for i in 0..len {
        let mut s = if i == 0 { 1 } else { 0 };
        for j in 1..=i.min(q.len() - 1) {
            s = field.sub(s, field.mul(q[j], out[i - j]));
        }
        out[i] = field.mul(s, inv0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Vec<Letter> {
        parse_letters(s)
    }

    #[test]
    fn paperfolding_formula_examples() {
        let first: Vec<u64> = (1..=8).map(|i| paperfolding(1, i).unwrap()).collect();
        assert_eq!(first, [0, 0, 1, 0, 0, 1, 1, 0]);
        let second: Vec<u64> = (1..=8).map(|i| paperfolding(2, i).unwrap()).collect();
        assert_eq!(second, [0, 0, 1, 0, 2, 1, 3, 0]);
        assert_eq!(paperfolding(1, 1 << 40), Ok(0));
        assert_eq!(paperfolding(1, 0), Err(SeqError::IndexZero));
    }

    #[test]
    fn fixed_point_examples() {
        let pf1 = paperfolding_level1();
        assert_eq!(pf1.fixed_point_prefix(8), word("ABCBADCB"));
        let pf2 = paperfolding_level2();
        assert_eq!(pf2.fixed_point_prefix(4), word("ABCD"));
        let id = Morphism1D::identity(1);
        assert_eq!(fixed_point_prefix(&id, 0, 5).unwrap(), vec![0; 5]);
    }

    #[test]
    fn not_prolongable_is_rejected() {
        let m = Morphism1D::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            fixed_point_prefix(&m, 0, 4),
            Err(SeqError::NotProlongable(0))
        );
        let c = Coding::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(SequenceSpec::new(m, c, 0), Err(SeqError::NotProlongable(0)));
    }

    #[test]
    fn coding_and_compression_examples() {
        let pf1 = paperfolding_level1();
        assert_eq!(pf1.coding().apply(&word("ABCB")), [0, 0, 1, 0]);
        assert!(pf1.coding().apply(&[]).is_empty());
        let once = compress(pf1.morphism(), pf1.coding());
        assert_eq!(once.image(1), [1, 0]);
        assert_eq!(
            (0..4).map(|l| once.image(l).to_vec()).collect::<Vec<_>>(),
            [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        let twice = compress(pf1.morphism(), &once);
        assert_eq!(twice.image(0), [0, 0, 1, 0]);
        assert_eq!(twice.image(1), [0, 1, 1, 0]);
        assert_eq!(twice.image(2), [0, 0, 1, 1]);
        assert_eq!(twice.image(3), [0, 1, 1, 1]);
        let id = Morphism1D::identity(4);
        assert_eq!(&compress(&id, pf1.coding()), pf1.coding());
    }

    #[test]
    fn compressed_to_hits_the_requested_block_length() {
        let pf1 = paperfolding_level1();
        assert_eq!(pf1.compressed_to(8).unwrap().coding().d(), 8);
        assert!(pf1.compressed_to(6).is_none());
    }

    #[test]
    fn digit_lookup_matches_buffer_expansion() {
        for spec in [paperfolding_level1(), paperfolding_level2(), thue_morse()] {
            let prefix = spec.fixed_point_prefix(1000);
            for (i, &l) in prefix.iter().enumerate() {
                assert_eq!(
                    fixed_point_letter(spec.morphism(), spec.start(), i as u64),
                    l
                );
            }
        }
    }

    #[test]
    fn parse_round_trips_builtins() {
        for spec in [paperfolding_level1(), paperfolding_level2(), thue_morse()] {
            let text = spec.to_string();
            let parsed = SequenceSpec::parse(&text).unwrap();
            assert_eq!(parsed.morphism(), spec.morphism());
            assert_eq!(parsed.coding(), spec.coding());
            assert_eq!(parsed.start(), spec.start());
        }
    }

    #[test]
    fn parse_reports_bad_input() {
        assert!(matches!(
            SequenceSpec::parse("A -> A B : 0\nB -> C B : 0\n"),
            Err(SeqError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SequenceSpec::parse("A -> A B 0"),
            Err(SeqError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            SequenceSpec::parse("A -> A B : 0\nB -> A : 1"),
            Err(SeqError::NonUniform { letter: 1, .. })
        ));
        assert!(matches!(
            SequenceSpec::parse("A -> B A : 0\nB -> A B : 1"),
            Err(SeqError::NotProlongable(0))
        ));
        let spec = SequenceSpec::parse("# comment\nX -> Y X : 1\nY -> Y Y : 0\nstart Y\n").unwrap();
        assert_eq!(spec.start(), 1);
        assert_eq!(spec.letter_name(0), "X");
    }

    #[test]
    fn laurent_identity_and_shift() {
        let f3 = PrimeField::new(3).unwrap();
        let a: Vec<u8> = (1..=10)
            .map(|i| paperfolding(1, i).unwrap() as u8)
            .collect();
        let t = Poly::new(&f3, &[0, 1]).unwrap();
        assert_eq!(laurent_substitute(&f3, &a, &t, 10).unwrap(), a);
        let t2 = Poly::new(&f3, &[0, 0, 1]).unwrap();
        assert_eq!(
            laurent_substitute(&f3, &[1, 0, 0, 0], &t2, 4).unwrap(),
            [0, 1, 0, 0]
        );
        let c = Poly::new(&f3, &[5]).unwrap();
        assert_eq!(
            laurent_substitute(&f3, &a, &c, 4),
            Err(SeqError::DegreeZero)
        );
        assert_eq!(Poly::new(&f3, &[0, 3]), Err(SeqError::ZeroPolynomial));
        assert_eq!(
            laurent_substitute(&f3, &a[..2], &t, 4),
            Err(SeqError::NotEnoughTerms { needed: 4, got: 2 })
        );
    }
}
