//! The cyclotomic asymmetric cipher.
//!
//! The public key is a generator `g'` of `F_p*` (plus the parameters `p`
//! and `l`); its cyclotomic matrix `B` is the encryption map, `C = B * A`.
//! The secret key is a second generator `g''` and the exponent `r0` with
//! `g''^r0 = g' (mod p)`. Because changing the generator only permutes the
//! matrix indices by `r0`, the key holder can rebuild `B` from `g''` and
//! `r0` without ever knowing `g'`, invert it exactly, and decrypt with
//! `A = Z * C`.
//!
//! The scheme is a fixed public linear map, so it falls to elementary
//! linear algebra: [`break_ciphertext`] decrypts with no secret material
//! at all by inverting the public matrix. It is implemented here precisely
//! to demonstrate that weakness.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomy::{cyclotomic_matrix, permuted_equality_table, CyclotomyParams, RepTable};
use crate::error::{Error, Result};
use crate::field::{self, Generator};
use crate::matrix::{fits_in_byte, IntMatrix, RatMatrix};

/// How many public-generator draws `keygen` attempts before reporting
/// failure instead of looping.
const PUBLIC_DRAW_BUDGET: usize = 64;

/// Public key: the parameters and the generator whose cyclotomic matrix
/// encrypts. Construction verifies the matrix is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: CyclotomyParams,
    gamma_prime: Generator,
}

impl PublicKey {
    pub fn new(params: CyclotomyParams, gamma_prime: Generator) -> Result<Self> {
        let key = Self {
            params,
            gamma_prime,
        };
        if key.matrix().determinant().is_zero() {
            return Err(Error::SingularMatrix(format!(
                "public matrix for generator {} is singular",
                key.gamma_prime.value()
            )));
        }
        Ok(key)
    }

    pub fn params(&self) -> &CyclotomyParams {
        &self.params
    }

    pub fn gamma_prime(&self) -> &Generator {
        &self.gamma_prime
    }

    /// The public cyclotomic matrix as an integer matrix.
    pub fn matrix(&self) -> IntMatrix {
        cyclotomic_matrix(&self.gamma_prime, &self.params).to_int_matrix()
    }
}

/// Secret key: the second generator and the discrete log `r0` tying it to
/// the public one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    params: CyclotomyParams,
    gamma_double_prime: Generator,
    r0: BigUint,
}

impl SecretKey {
    pub fn new(
        params: CyclotomyParams,
        gamma_double_prime: Generator,
        r0: BigUint,
    ) -> Result<Self> {
        if r0.is_zero() || r0 > params.modulus().p_minus_1() {
            return Err(Error::Param(format!(
                "r0 = {r0} outside [1, p-1] for p = {}",
                params.modulus().p()
            )));
        }
        Ok(Self {
            params,
            gamma_double_prime,
            r0,
        })
    }

    pub fn params(&self) -> &CyclotomyParams {
        &self.params
    }

    pub fn gamma_double_prime(&self) -> &Generator {
        &self.gamma_double_prime
    }

    pub fn r0(&self) -> &BigUint {
        &self.r0
    }

    /// The representative grid with every entry's indices multiplied by
    /// `r0` (mod `e`) and re-canonicalized — the symbolic form of the
    /// public matrix as seen from the secret generator.
    pub fn permuted_rep_table(&self) -> RepTable {
        let r = (self.r0.clone() % self.params.e())
            .to_u64()
            .expect("e fits u64");
        permuted_equality_table(&self.params, r)
    }

    /// Rebuilds the public cyclotomic matrix from secret material alone:
    /// permute the representative grid by `r0`, then substitute each
    /// representative's count under the secret generator.
    pub fn rebuild_public_matrix(&self) -> IntMatrix {
        let table = self.permuted_rep_table();
        let counts = cyclotomic_matrix(&self.gamma_double_prime, &self.params);
        let e = self.params.e();
        let mut cells = Vec::with_capacity((e * e) as usize);
        for a in 0..e {
            for b in 0..e {
                let rep = table.get(a, b);
                cells.push(counts.get(rep.a, rep.b).into());
            }
        }
        IntMatrix::new(e as usize, e as usize, cells)
    }
}

/// A generated key pair. The two halves always satisfy
/// `gamma''^r0 = gamma' (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub public: PublicKey,
    pub secret: SecretKey,
}

/// The expanded secret key: the exact rational inverse of the public
/// matrix, ready to multiply ciphertext blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedKey {
    params: CyclotomyParams,
    z_matrix: RatMatrix,
}

impl ExpandedKey {
    pub fn params(&self) -> &CyclotomyParams {
        &self.params
    }

    pub fn z_matrix(&self) -> &RatMatrix {
        &self.z_matrix
    }
}

/// A plaintext block: an `e x e` matrix of byte values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageBlock {
    matrix: IntMatrix,
}

impl MessageBlock {
    /// Validates shape and the byte range of every cell.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Format(format!(
                "message block must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some(bad) = matrix.cells().iter().find(|c| !fits_in_byte(c)) {
            return Err(Error::Format(format!(
                "message block cell {bad} outside [0, 255]"
            )));
        }
        Ok(Self { matrix })
    }

    /// Packs exactly `e^2` bytes row-major into a block.
    pub fn from_bytes(e: u64, bytes: &[u8]) -> Self {
        let e = e as usize;
        assert_eq!(bytes.len(), e * e, "block needs exactly e^2 bytes");
        let cells = bytes.iter().map(|&x| x.into()).collect();
        Self {
            matrix: IntMatrix::new(e, e, cells),
        }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u64 {
        self.matrix.rows() as u64
    }

    /// Row-major byte dump (total by the cell-range invariant).
    pub fn to_bytes(&self) -> Vec<u8> {
        self.matrix
            .cells()
            .iter()
            .map(|c| c.to_u8().expect("cells in [0, 255]"))
            .collect()
    }
}

/// A ciphertext block: an `e x e` matrix of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherBlock {
    matrix: IntMatrix,
}

impl CipherBlock {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Format(format!(
                "cipher block must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some(bad) = matrix.cells().iter().find(|c| c < &&BigInt::zero()) {
            return Err(Error::Format(format!(
                "cipher block cell {bad} is negative"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u64 {
        self.matrix.rows() as u64
    }
}

/// Generates a key pair with both generators drawn deterministically from
/// `seed`.
///
/// Requires `k >= 2`: with `k = 1` one matrix row always sums to zero, so
/// every cyclotomic matrix is singular. If a drawn public generator yields
/// a singular matrix the draw is retried up to a fixed budget and the
/// failure is reported rather than looped on.
pub fn keygen(l: u64, p: u64, seed: u64) -> Result<KeyPair> {
    let params = CyclotomyParams::from_primes(l, p)?;
    if params.k() < 2 {
        return Err(Error::Param(format!(
            "k = 1 for (l = {l}, p = {p}): every cyclotomic matrix is singular"
        )));
    }
    let generators = field::find_generators(params.modulus());
    if generators.len() < 2 {
        return Err(Error::Param(format!(
            "need at least two generators, F_{p}^* has {}",
            generators.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut public_idx = None;
    for _ in 0..PUBLIC_DRAW_BUDGET {
        let idx = rng.gen_range(0..generators.len());
        let candidate = &generators[idx];
        if !cyclotomic_matrix(candidate, &params)
            .to_int_matrix()
            .determinant()
            .is_zero()
        {
            public_idx = Some(idx);
            break;
        }
    }
    let public_idx = public_idx.ok_or_else(|| {
        Error::SingularMatrix(format!(
            "no generator with an invertible matrix found in {PUBLIC_DRAW_BUDGET} draws"
        ))
    })?;

    let mut secret_idx = rng.gen_range(0..generators.len());
    if secret_idx == public_idx {
        secret_idx = (secret_idx + 1) % generators.len();
    }

    keygen_from_generators(
        params,
        generators[public_idx].clone(),
        generators[secret_idx].clone(),
    )
}

/// Builds a key pair from explicitly chosen generators, computing
/// `r0 = log_{g''}(g')`.
pub fn keygen_from_generators(
    params: CyclotomyParams,
    gamma_prime: Generator,
    gamma_double_prime: Generator,
) -> Result<KeyPair> {
    if gamma_prime.value() == gamma_double_prime.value() {
        return Err(Error::Param(
            "public and secret generators must differ".into(),
        ));
    }
    let r0 = field::discrete_log(&gamma_double_prime, gamma_prime.value())?;
    let public = PublicKey::new(params.clone(), gamma_prime)?;
    let secret = SecretKey::new(params, gamma_double_prime, r0)?;
    Ok(KeyPair { public, secret })
}

/// Frames `data` with an 8-byte big-endian length header, zero-pads to a
/// multiple of `e^2`, and splits row-major into `e x e` blocks.
pub fn encode_message(data: &[u8], params: &CyclotomyParams) -> Vec<MessageBlock> {
    let e = params.e();
    let block_len = (e * e) as usize;
    let mut framed = Vec::with_capacity(8 + data.len());
    framed.extend_from_slice(&(data.len() as u64).to_be_bytes());
    framed.extend_from_slice(data);
    framed.resize(framed.len().div_ceil(block_len) * block_len, 0);
    framed
        .chunks_exact(block_len)
        .map(|chunk| MessageBlock::from_bytes(e, chunk))
        .collect()
}

/// Inverse of [`encode_message`]: strips the length header and padding.
pub fn decode_message(blocks: &[MessageBlock]) -> Result<Vec<u8>> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::Format("no blocks to decode".into()))?;
    let block_len = (first.order() * first.order()) as usize;
    let mut bytes = Vec::with_capacity(blocks.len() * block_len);
    for block in blocks {
        if block.order() != first.order() {
            return Err(Error::Format("blocks of mixed order".into()));
        }
        bytes.extend_from_slice(&block.to_bytes());
    }
    if bytes.len() < 8 {
        return Err(Error::Format(
            "blocks too small to hold a length header".into(),
        ));
    }
    let declared = u64::from_be_bytes(bytes[..8].try_into().expect("checked above"));
    let declared: usize = declared
        .try_into()
        .map_err(|_| Error::Format(format!("declared length {declared} not addressable")))?;
    let total = bytes.len();
    // The producer emits exactly ceil((8 + n) / e^2) blocks.
    if 8 + declared > total || 8 + declared <= total - block_len {
        return Err(Error::Format(format!(
            "declared length {declared} inconsistent with {} block(s)",
            blocks.len()
        )));
    }
    bytes.drain(..8);
    bytes.truncate(declared);
    Ok(bytes)
}

fn encrypt_with_matrix(public_matrix: &IntMatrix, block: &MessageBlock) -> Result<CipherBlock> {
    if block.order() as usize != public_matrix.rows() {
        return Err(Error::Param(format!(
            "message block order {} does not match e = {}",
            block.order(),
            public_matrix.rows()
        )));
    }
    Ok(CipherBlock {
        matrix: public_matrix.mat_mul(block.matrix()),
    })
}

/// Encrypts one block: `C = B * A` with `B` the public cyclotomic matrix.
pub fn encrypt(pk: &PublicKey, block: &MessageBlock) -> Result<CipherBlock> {
    let b = pk.matrix();
    if b.determinant().is_zero() {
        return Err(Error::SingularMatrix(
            "public matrix became singular (corrupted key?)".into(),
        ));
    }
    encrypt_with_matrix(&b, block)
}

/// Encodes and encrypts a whole byte message, computing the public matrix
/// once.
pub fn encrypt_message(pk: &PublicKey, data: &[u8]) -> Result<Vec<CipherBlock>> {
    let b = pk.matrix();
    if b.determinant().is_zero() {
        return Err(Error::SingularMatrix(
            "public matrix became singular (corrupted key?)".into(),
        ));
    }
    encode_message(data, pk.params())
        .iter()
        .map(|block| encrypt_with_matrix(&b, block))
        .collect()
}

/// Expands the secret key into the exact inverse of the public matrix.
///
/// The steps: rebuild the public matrix from `(g'', r0)` via the index
/// permutation, then invert it exactly. The intermediate products are
/// exposed on [`SecretKey`] for inspection.
pub fn expand_secret(sk: &SecretKey) -> Result<ExpandedKey> {
    let rebuilt = sk.rebuild_public_matrix();
    let z_matrix = rebuilt.inverse()?;
    Ok(ExpandedKey {
        params: sk.params().clone(),
        z_matrix,
    })
}

/// Shared by decryption and the attack: apply an exact inverse to a cipher
/// block and insist the result is a valid byte matrix.
fn recover_block(
    z: &RatMatrix,
    params: &CyclotomyParams,
    cipher: &CipherBlock,
) -> Result<MessageBlock> {
    if cipher.order() != params.e() {
        return Err(Error::Param(format!(
            "cipher block order {} does not match e = {}",
            cipher.order(),
            params.e()
        )));
    }
    let product = z.rat_mul(cipher.matrix());
    let matrix = product.to_int_matrix().ok_or_else(|| {
        Error::Integrity("recovered block is not integral; key/ciphertext mismatch".into())
    })?;
    if let Some(bad) = matrix.cells().iter().find(|c| !fits_in_byte(c)) {
        return Err(Error::Integrity(format!(
            "recovered cell {bad} outside [0, 255]; corrupted ciphertext"
        )));
    }
    Ok(MessageBlock { matrix })
}

/// Decrypts one block: `A = Z * C`.
pub fn decrypt(ek: &ExpandedKey, cipher: &CipherBlock) -> Result<MessageBlock> {
    recover_block(&ek.z_matrix, &ek.params, cipher)
}

/// Decrypts a block sequence and strips the message framing.
pub fn decrypt_message(ek: &ExpandedKey, blocks: &[CipherBlock]) -> Result<Vec<u8>> {
    let recovered = blocks
        .iter()
        .map(|c| decrypt(ek, c))
        .collect::<Result<Vec<_>>>()?;
    decode_message(&recovered)
}

/// Decrypts one block *without any secret material* by inverting the
/// public matrix directly. Output is identical to [`decrypt`] on every
/// valid ciphertext — the scheme's fatal weakness.
pub fn break_ciphertext(pk: &PublicKey, cipher: &CipherBlock) -> Result<MessageBlock> {
    let z = pk.matrix().inverse()?;
    recover_block(&z, pk.params(), cipher)
}

/// Breaks a whole message with the public key alone.
pub fn attack_message(pk: &PublicKey, blocks: &[CipherBlock]) -> Result<Vec<u8>> {
    let z = pk.matrix().inverse()?;
    let recovered = blocks
        .iter()
        .map(|c| recover_block(&z, pk.params(), c))
        .collect::<Result<Vec<_>>>()?;
    decode_message(&recovered)
}
