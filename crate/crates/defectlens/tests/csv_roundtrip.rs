use defectlens::formats::{dataset_csv, read_dataset_csv};
use defectlens_core::dataset::{Dataset, DatasetRow, Metric};
use proptest::prelude::*;

fn row() -> impl Strategy<Value = DatasetRow> {
    (
        "[a-z]{1,6}",
        0u32..20,
        "[A-Za-z0-9.$,\" ]{1,12}",
        prop::collection::vec(0u32..5000, 11),
        0.0f64..=1.0,
        any::<bool>(),
    )
        .prop_map(|(project, release, fqn, ints, cd, defective)| {
            let mut features: Vec<f64> = ints.into_iter().map(f64::from).collect();
            features.push(cd);
            DatasetRow {
                project,
                release,
                fqn,
                features,
                defective,
            }
        })
}

proptest! {
    #[test]
    fn write_read_is_identity_after_serialization(rows in prop::collection::vec(row(), 0..30)) {
        let mut d = Dataset::default();
        for r in rows {
            d.push(r).unwrap();
        }
        let text = dataset_csv(&d);
        prop_assert!(!text.contains('\r'));
        let back = read_dataset_csv(&text).unwrap();
        prop_assert_eq!(back.len(), d.len());
        // Integer columns are exact; CD is kept to six decimals.
        for (a, b) in d.rows().iter().zip(back.rows()) {
            prop_assert_eq!(&a.project, &b.project);
            prop_assert_eq!(&a.fqn, &b.fqn);
            prop_assert_eq!(a.release, b.release);
            prop_assert_eq!(a.defective, b.defective);
            prop_assert_eq!(&a.features[..11], &b.features[..11]);
            let cd = Metric::Cd.index();
            prop_assert!((a.features[cd] - b.features[cd]).abs() <= 5e-7);
        }
        // Re-reading serialized values is exact.
        prop_assert_eq!(dataset_csv(&back), text.clone());
        prop_assert_eq!(read_dataset_csv(&dataset_csv(&back)).unwrap(), back);
    }
}
