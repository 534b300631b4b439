"""Saliency-map estimation for omni-directional images.

Thin Python layer over the C++ core: view extraction and integration on the
sphere, pluggable per-view saliency backends, equator-bias priors, and the
KL/CC/NSS/AUC evaluation suite.
"""

from ._core import (
    BlurSpec,
    Boundary,
    ConstantBackend,
    Direction3,
    EquatorBias,
    FileBackend,
    FitConfig,
    FitLoss,
    FusedMap,
    LatitudeBiasSet,
    MetricNormalization,
    MetricReport,
    OdisalError,
    Raster,
    SaliencyBackend,
    SpectralResidualBackend,
    SphericalCoord,
    ViewFrame,
    ViewGrid,
    auc_judd,
    average_equator_bias,
    compose_bias_equirect,
    direction_to_spherical,
    equirect_pixel_to_spherical,
    equirect_spherical_to_pixel,
    estimate,
    evaluate_map,
    extract_view,
    fit_latitude_bias,
    fit_normalization,
    gaussian_blur,
    integrate_views,
    integrated_metric,
    kl_div,
    load_map,
    make_gt_map,
    normalize_sum,
    nss,
    pearson_cc,
    project_to_view,
    resize_bilinear,
    sample_bilinear,
    save_map,
    spherical_to_direction,
    view_frame,
    view_grid,
    view_grid_count,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
