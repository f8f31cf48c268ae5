use crate::ckks::keys::{EvaluationKey, KeyKind, SecretKey};
use crate::ckks::{Ciphertext, CkksContext, Plaintext};
use crate::error::{Error, Result};
use crate::poly::{LimbBasis, Representation, RnsPoly};
use crate::serial::{Header, ObjectKind, Reader, Writer};

fn header(kind: ObjectKind, basis: &LimbBasis, level: usize) -> Header {
    Header {
        kind,
        degree: basis.degree(),
        level,
        primes: basis.primes(),
    }
}

fn check_header(ctx: &CkksContext, h: &Header, expected: &LimbBasis) -> Result<()> {
    if h.degree != ctx.degree() {
        return Err(Error::Serialization(format!(
            "ring degree {} does not match parameters ({})",
            h.degree,
            ctx.degree()
        )));
    }
    if h.primes != expected.primes() {
        return Err(Error::Serialization("prime basis does not match parameters".into()));
    }
    Ok(())
}

fn header_level(ctx: &CkksContext, h: &Header) -> Result<usize> {
    if h.level > ctx.max_level() {
        return Err(Error::Serialization(format!("level {} exceeds L", h.level)));
    }
    Ok(h.level)
}

fn write_poly(w: &mut Writer, p: &RnsPoly) {
    w.u8(match p.representation() {
        Representation::Coefficient => 0,
        Representation::Evaluation => 1,
    });
    for l in p.limbs() {
        w.words(l);
    }
}

fn read_poly(r: &mut Reader, basis: &LimbBasis) -> Result<RnsPoly> {
    let repr = match r.u8()? {
        0 => Representation::Coefficient,
        1 => Representation::Evaluation,
        v => return Err(Error::Serialization(format!("bad representation tag {v}"))),
    };
    let limbs = (0..basis.len())
        .map(|_| r.words(basis.degree()))
        .collect::<Result<Vec<_>>>()?;
    RnsPoly::from_limbs(basis, limbs, repr).map_err(|e| Error::Serialization(e.to_string()))
}

impl Ciphertext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(&header(ObjectKind::Ciphertext, self.b.basis(), self.level));
        w.f64(self.scale);
        write_poly(&mut w, &self.b);
        write_poly(&mut w, &self.a);
        w.finish()
    }

    pub fn from_bytes(ctx: &CkksContext, data: &[u8]) -> Result<Self> {
        let (mut r, h) = Reader::open(data, ObjectKind::Ciphertext)?;
        let level = header_level(ctx, &h)?;
        let basis = ctx.level_basis(level);
        check_header(ctx, &h, &basis)?;
        let scale = r.f64()?;
        let b = read_poly(&mut r, &basis)?;
        let a = read_poly(&mut r, &basis)?;
        r.finish()?;
        Ciphertext::new(b, a, scale).map_err(|e| Error::Serialization(e.to_string()))
    }
}

impl Plaintext {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(&header(ObjectKind::Plaintext, self.poly.basis(), self.level));
        w.f64(self.scale);
        write_poly(&mut w, &self.poly);
        w.finish()
    }

    pub fn from_bytes(ctx: &CkksContext, data: &[u8]) -> Result<Self> {
        let (mut r, h) = Reader::open(data, ObjectKind::Plaintext)?;
        let level = header_level(ctx, &h)?;
        let basis = ctx.level_basis(level);
        check_header(ctx, &h, &basis)?;
        let scale = r.f64()?;
        let poly = read_poly(&mut r, &basis)?;
        r.finish()?;
        Ok(Plaintext { poly, scale, level })
    }
}

impl SecretKey {
    /// Only the ternary coefficients are stored; the evaluation form is rebuilt.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(&header(ObjectKind::SecretKey, self.poly.basis(), 0));
        let raw: Vec<u8> = self.coeffs.iter().map(|&c| c as u8).collect();
        w.bytes(&raw);
        w.finish()
    }

    pub fn from_bytes(ctx: &CkksContext, data: &[u8]) -> Result<Self> {
        let (mut r, h) = Reader::open(data, ObjectKind::SecretKey)?;
        check_header(ctx, &h, ctx.d_basis())?;
        let raw = r.bytes()?;
        r.finish()?;
        if raw.len() != ctx.degree() {
            return Err(Error::Serialization("secret key length mismatch".into()));
        }
        let coeffs: Vec<i8> = raw.iter().map(|&b| b as i8).collect();
        if coeffs.iter().any(|c| !(-1..=1).contains(c)) {
            return Err(Error::Serialization("secret key coefficient is not ternary".into()));
        }
        SecretKey::from_coefficients(ctx, coeffs)
    }
}

impl EvaluationKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let basis = self.pairs[0].0.basis();
        let mut w = Writer::new(&header(ObjectKind::EvaluationKey, basis, 0));
        match self.kind {
            KeyKind::Mult => {
                w.u8(0);
                w.u64(0);
            }
            KeyKind::Rotation { galois } => {
                w.u8(1);
                w.u64(galois as u64);
            }
        }
        w.u32(self.pairs.len() as u32);
        for (b, a) in &self.pairs {
            write_poly(&mut w, b);
            write_poly(&mut w, a);
        }
        w.finish()
    }

    pub fn from_bytes(ctx: &CkksContext, data: &[u8]) -> Result<Self> {
        let (mut r, h) = Reader::open(data, ObjectKind::EvaluationKey)?;
        check_header(ctx, &h, ctx.d_basis())?;
        let tag = r.u8()?;
        let galois = r.u64()? as usize;
        let kind = match tag {
            0 => KeyKind::Mult,
            1 if galois % 2 == 1 && galois < 2 * ctx.degree() => KeyKind::Rotation { galois },
            _ => return Err(Error::Serialization("bad evaluation key kind".into())),
        };
        let count = r.u32()? as usize;
        if count != ctx.params().dnum {
            return Err(Error::Serialization(format!(
                "{count} key pairs, parameters need {}",
                ctx.params().dnum
            )));
        }
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let b = read_poly(&mut r, ctx.d_basis())?;
            let a = read_poly(&mut r, ctx.d_basis())?;
            pairs.push((b, a));
        }
        r.finish()?;
        Ok(EvaluationKey { kind, pairs })
    }
}
