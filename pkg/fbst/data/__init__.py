from fbst.data.draws_loader import FORMATS, DrawsFileSpec, load_draws, load_reference_table

__all__ = ["FORMATS", "DrawsFileSpec", "load_draws", "load_reference_table"]
