//! Key and ciphertext file formats.
//!
//! All integers are serialized as decimal strings so that arbitrary-
//! precision values survive readers that truncate JSON numbers to 64 bits.
//! Every constraint on the in-memory key types is re-validated on load;
//! in particular `r0` is recomputed from the stored generators and must
//! match, which catches corrupted or hand-edited secret files.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use cac_core::cac::{CipherBlock, PublicKey, SecretKey};
use cac_core::cyclotomy::CyclotomyParams;
use cac_core::field::{discrete_log, Generator, PrimeModulus};
use cac_core::matrix::IntMatrix;
use cac_core::{Error, Result};

pub const FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KeyFile {
    pub version: u32,
    pub role: String,
    pub p: String,
    pub l: String,
    pub gamma_prime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_double_prime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CipherFile {
    pub version: u32,
    pub p: String,
    pub l: String,
    pub gamma_prime: String,
    pub blocks: Vec<Vec<Vec<String>>>,
}

fn parse_biguint(field: &str, s: &str) -> Result<BigUint> {
    s.parse()
        .map_err(|_| Error::Format(format!("field '{field}' is not a decimal integer: {s:?}")))
}

fn parse_u64(field: &str, s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::Format(format!("field '{field}' is not a decimal integer: {s:?}")))
}

fn check_version(version: u32) -> Result<()> {
    if version != FILE_VERSION {
        return Err(Error::Format(format!(
            "unsupported file version {version}, expected {FILE_VERSION}"
        )));
    }
    Ok(())
}

impl KeyFile {
    pub fn from_public(pk: &PublicKey) -> Self {
        Self {
            version: FILE_VERSION,
            role: "public".into(),
            p: pk.params().modulus().p().to_string(),
            l: pk.params().l().to_string(),
            gamma_prime: pk.gamma_prime().value().to_string(),
            gamma_double_prime: None,
            r0: None,
        }
    }

    pub fn from_secret(pk: &PublicKey, sk: &SecretKey) -> Self {
        Self {
            version: FILE_VERSION,
            role: "secret".into(),
            p: sk.params().modulus().p().to_string(),
            l: sk.params().l().to_string(),
            gamma_prime: pk.gamma_prime().value().to_string(),
            gamma_double_prime: Some(sk.gamma_double_prime().value().to_string()),
            r0: Some(sk.r0().to_string()),
        }
    }

    fn params(&self) -> Result<CyclotomyParams> {
        let p = parse_biguint("p", &self.p)?;
        let l = parse_u64("l", &self.l)?;
        CyclotomyParams::new(l, PrimeModulus::new(p)?)
    }

    /// Loads and re-validates a public key. Requires `role = "public"`.
    pub fn to_public(&self) -> Result<PublicKey> {
        check_version(self.version)?;
        if self.role != "public" {
            return Err(Error::Format(format!(
                "expected a public key file, found role {:?}",
                self.role
            )));
        }
        let params = self.params()?;
        let gamma_prime = Generator::new(
            parse_biguint("gamma_prime", &self.gamma_prime)?,
            params.modulus(),
        )?;
        PublicKey::new(params, gamma_prime)
    }

    /// Loads and re-validates a secret key, returning the paired public key
    /// as well. The stored `r0` must equal the recomputed discrete log.
    pub fn to_secret(&self) -> Result<(PublicKey, SecretKey)> {
        check_version(self.version)?;
        if self.role != "secret" {
            return Err(Error::Format(format!(
                "expected a secret key file, found role {:?}",
                self.role
            )));
        }
        let params = self.params()?;
        let gamma_prime = Generator::new(
            parse_biguint("gamma_prime", &self.gamma_prime)?,
            params.modulus(),
        )?;
        let g2_str = self
            .gamma_double_prime
            .as_ref()
            .ok_or_else(|| Error::Format("secret key file is missing gamma_double_prime".into()))?;
        let gamma_double_prime = Generator::new(
            parse_biguint("gamma_double_prime", g2_str)?,
            params.modulus(),
        )?;
        if gamma_double_prime.value() == gamma_prime.value() {
            return Err(Error::Format("the two generators must differ".into()));
        }
        let r0_str = self
            .r0
            .as_ref()
            .ok_or_else(|| Error::Format("secret key file is missing r0".into()))?;
        let r0 = parse_biguint("r0", r0_str)?;
        let recomputed = discrete_log(&gamma_double_prime, gamma_prime.value())?;
        if recomputed != r0 {
            return Err(Error::Format(format!(
                "stored r0 = {r0} does not match recomputed value {recomputed}; corrupted key file"
            )));
        }
        let public = PublicKey::new(params.clone(), gamma_prime)?;
        let secret = SecretKey::new(params, gamma_double_prime, r0)?;
        Ok((public, secret))
    }
}

impl CipherFile {
    pub fn new(pk: &PublicKey, blocks: &[CipherBlock]) -> Self {
        Self {
            version: FILE_VERSION,
            p: pk.params().modulus().p().to_string(),
            l: pk.params().l().to_string(),
            gamma_prime: pk.gamma_prime().value().to_string(),
            blocks: blocks
                .iter()
                .map(|b| {
                    let e = b.order() as usize;
                    (0..e)
                        .map(|i| (0..e).map(|j| b.matrix()[(i, j)].to_string()).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Checks that the ciphertext was produced under the given public
    /// parameters and generator.
    pub fn check_binding(&self, p: &BigUint, l: u64, gamma_prime: &BigUint) -> Result<()> {
        check_version(self.version)?;
        let file_p = parse_biguint("p", &self.p)?;
        let file_l = parse_u64("l", &self.l)?;
        let file_g = parse_biguint("gamma_prime", &self.gamma_prime)?;
        if &file_p != p || file_l != l || &file_g != gamma_prime {
            return Err(Error::Param(format!(
                "ciphertext bound to (p = {file_p}, l = {file_l}, generator = {file_g}), \
                 key has (p = {p}, l = {l}, generator = {gamma_prime})"
            )));
        }
        Ok(())
    }

    /// Parses and validates the blocks against the expected order `e`.
    pub fn to_blocks(&self, e: u64) -> Result<Vec<CipherBlock>> {
        let e = e as usize;
        let mut out = Vec::with_capacity(self.blocks.len());
        for (n, grid) in self.blocks.iter().enumerate() {
            if grid.len() != e || grid.iter().any(|row| row.len() != e) {
                return Err(Error::Format(format!("block {n} is not a {e}x{e} grid")));
            }
            let mut cells = Vec::with_capacity(e * e);
            for row in grid {
                for cell in row {
                    let value: BigInt = cell.parse().map_err(|_| {
                        Error::Format(format!("block {n} holds a non-integer cell: {cell:?}"))
                    })?;
                    cells.push(value);
                }
            }
            out.push(CipherBlock::new(IntMatrix::new(e, e, cells))?);
        }
        Ok(out)
    }
}

/// Serializes any of the file types with a stable, byte-reproducible layout.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8], what: &str) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| Error::Format(format!("malformed {what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cac_core::cac::keygen;

    #[test]
    fn key_files_round_trip() {
        let pair = keygen(2, 17, 32).unwrap();
        let public = KeyFile::from_public(&pair.public);
        let bytes = to_json_bytes(&public);
        let reread: KeyFile = parse_json(&bytes, "key file").unwrap();
        assert_eq!(to_json_bytes(&reread), bytes);
        assert_eq!(reread.to_public().unwrap(), pair.public);

        let secret = KeyFile::from_secret(&pair.public, &pair.secret);
        let bytes = to_json_bytes(&secret);
        let reread: KeyFile = parse_json(&bytes, "key file").unwrap();
        let (pk, sk) = reread.to_secret().unwrap();
        assert_eq!(pk, pair.public);
        assert_eq!(sk, pair.secret);
    }

    #[test]
    fn secret_load_rejects_wrong_r0() {
        let pair = keygen(2, 17, 32).unwrap();
        let mut file = KeyFile::from_secret(&pair.public, &pair.secret);
        file.r0 = Some("5".into());
        let err = file.to_secret().unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err}");
    }

    #[test]
    fn role_mixups_are_rejected() {
        let pair = keygen(2, 17, 32).unwrap();
        let public = KeyFile::from_public(&pair.public);
        assert!(public.to_secret().is_err());
        let secret = KeyFile::from_secret(&pair.public, &pair.secret);
        assert!(secret.to_public().is_err());
    }

    #[test]
    fn cipher_file_round_trips_and_validates() {
        let pair = keygen(2, 17, 32).unwrap();
        let blocks = cac_core::cac::encrypt_message(&pair.public, b"hello world").unwrap();
        let file = CipherFile::new(&pair.public, &blocks);
        let bytes = to_json_bytes(&file);
        let reread: CipherFile = parse_json(&bytes, "cipher file").unwrap();
        assert_eq!(to_json_bytes(&reread), bytes);
        assert_eq!(reread.to_blocks(8).unwrap(), blocks);
        reread
            .check_binding(
                pair.public.params().modulus().p(),
                2,
                pair.public.gamma_prime().value(),
            )
            .unwrap();
        assert!(reread
            .check_binding(pair.public.params().modulus().p(), 2, &BigUint::from(3u32))
            .is_err());
    }
}
