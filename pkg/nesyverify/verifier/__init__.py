"""End-to-end verification of networks feeding a compiled circuit."""
from nesyverify.verifier.dataset import Dataset, group_tuples, load_dataset_npz, save_dataset_npz
from nesyverify.verifier.manifest import (
    QuerySpec,
    SystemManifest,
    build_system,
    load_system,
    manifest_for,
    parse_manifest,
    save_manifest,
)
from nesyverify.verifier.report import (
    SampleResult,
    VerificationReport,
    report_csv,
    write_report_csv,
    write_report_json,
)
from nesyverify.verifier.system import (
    ConstantLeaf,
    LeafBinding,
    NeSySystem,
    OutputBinding,
    build_driving_system,
    build_sum_system,
    predict,
)
from nesyverify.verifier.verify import (
    Argmax,
    Threshold,
    VerificationQuery,
    decide,
    leaf_bounds,
    verify_dataset,
    verify_sample,
    verify_sample_exact_symbolic,
)
