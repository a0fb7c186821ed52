use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(case id, tokens)`
pub type TokenDoc = (String, Vec<String>);

/// The five keyword titles from the original two-stage experiment.
pub const TABLE_ONE_TITLES: [&str; 5] = [
    "Sistem Pendukung Keputusan Promosi dan Evaluasi Kinerja Karyawan",
    "Apliasi Reminder Pembayaran Tagihan Flexi Home",
    "Sistem Navigasi Gedung dengan Metode Algoritma Djikstra",
    "Sistem Administrasi Realisasi Kredit BRIGUNA",
    "Perancangan dan Implementasi Aplikasi Sistem Monitoring",
];

fn term(i: usize) -> String {
    format!("w{i}")
}

/// Random corpus of up to `max_docs` documents, each with 1..=`max_tokens`
/// tokens drawn from a `vocab`-word pool. Low term ids are drawn more often
/// so documents share terms.
pub fn random_corpus(rng: &mut impl Rng, max_docs: usize, max_tokens: usize, vocab: usize) -> Vec<TokenDoc> {
    let n = rng.random_range(2..=max_docs);
    let width = n.to_string().len();
    (0..n)
        .map(|i| {
            let len = rng.random_range(1..=max_tokens);
            let tokens = (0..len).map(|_| term(skewed(rng, vocab))).collect();
            (format!("c{i:0width$}"), tokens)
        })
        .collect()
}

fn skewed(rng: &mut impl Rng, vocab: usize) -> usize {
    let u: f64 = rng.random();
    ((u * u) * vocab as f64) as usize % vocab
}

/// Query of 1..=8 tokens; roughly one in ten tokens is out of vocabulary.
pub fn random_query(rng: &mut impl Rng, vocab: usize) -> Vec<String> {
    let len = rng.random_range(1..=8);
    (0..len)
        .map(|_| {
            if rng.random_bool(0.1) {
                format!("oov{}", rng.random_range(0..5))
            } else {
                term(rng.random_range(0..vocab))
            }
        })
        .collect()
}

const LEADS: &[&str] = &[
    "Sistem", "Aplikasi", "Perancangan", "Implementasi", "Pengembangan", "Analisis", "Rancang Bangun",
];
const SUBJECTS: &[&str] = &[
    "Informasi", "Pendukung Keputusan", "Monitoring", "Administrasi", "Inventaris", "Penjadwalan",
    "Pengelolaan", "Pelaporan", "Presensi", "Reservasi", "Penggajian", "Kepegawaian", "Pemesanan",
    "Pendaftaran", "Pengarsipan", "Navigasi",
];
const OBJECTS: &[&str] = &[
    "Surat Masuk", "Data Pelanggan", "Tagihan", "Kredit", "Karyawan", "Mahasiswa", "Barang",
    "Aset", "Keuangan", "Ruangan", "Kendaraan", "Gudang", "Penjualan", "Pembelian", "Arsip",
    "Dokumen", "Laboratorium", "Perpustakaan", "Proyek", "Pasien",
];
const PLACES: &[&str] = &[
    "PT Pusri", "Bank Sumsel", "Dinas Pendidikan", "Universitas Sriwijaya", "RSUD Palembang",
    "Kantor Pos", "PLN Wilayah", "Pelindo", "Telkom Witel", "Pertamina RU III", "BPS Provinsi",
    "Kantor Camat",
];
const METHODS: &[&str] = &[
    "", "", "Berbasis Web", "Berbasis Android", "dengan Metode SAW", "Menggunakan Framework Laravel",
    "dengan Algoritma Dijkstra", "Berbasis Desktop", "Menggunakan QR Code",
];

/// `n` distinct practical-work style titles, reproducible from `seed`.
pub fn synthetic_titles(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let parts = [
            *LEADS.choose(&mut rng).unwrap(),
            *SUBJECTS.choose(&mut rng).unwrap(),
            *OBJECTS.choose(&mut rng).unwrap(),
            "pada",
            *PLACES.choose(&mut rng).unwrap(),
            *METHODS.choose(&mut rng).unwrap(),
        ];
        let title = parts
            .iter()
            .filter(|p| !p.is_empty())
            .copied()
            .collect::<Vec<_>>()
            .join(" ");
        if seen.insert(title.to_lowercase()) {
            out.push(title);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_titles_are_unique_and_reproducible() {
        let a = synthetic_titles(300, 9);
        assert_eq!(a, synthetic_titles(300, 9));
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 300);
    }

    #[test]
    fn random_corpus_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let c = random_corpus(&mut rng, 200, 30, 60);
            assert!(c.len() >= 2 && c.len() <= 200);
            for (_, toks) in &c {
                assert!(!toks.is_empty() && toks.len() <= 30);
            }
            let vocab: HashSet<_> = c.iter().flat_map(|(_, t)| t).collect();
            assert!(vocab.len() <= 60);
        }
    }
}
