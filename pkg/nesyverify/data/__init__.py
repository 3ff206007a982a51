"""Dataset ingestion and synthetic fixtures."""
from nesyverify.data.idx import read_idx, write_idx
from nesyverify.data.synthetic import digit_glyph, synthetic_digits, synthetic_frames
