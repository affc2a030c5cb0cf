"""Named scenarios reproducing the reference figures. Values use the config-file units (dB)."""
import copy
from typing import Dict

_M_GRID = "16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384"
_M_GRID_MULTICELL = "16, 64, 256, 1024, 4096, 16384, 65536, 262144, 1048576"

PRESETS: Dict[str, dict] = {
    "fig1": dict(
        caption="uplink, K=10, M=128, fD Ts=0.1, p_u sweep (MRC/ZF, Monte Carlo and bounds)",
        scenario=dict(
            kind="uplink_snr",
            sweep_parameter="p_u_db",
            sweep_values="-10, -5, 0, 5, 10, 15, 20",
        ),
        uplink=dict(M="128", K="10", fd_ts="0.1", pred_orders="1, 2", detectors="mrc, zf", monte_carlo="true"),
    ),
    "fig2": dict(
        caption="K=10, M=128, p_u=10 dB, fD Ts sweep",
        scenario=dict(
            kind="uplink_doppler",
            sweep_parameter="fd_ts",
            sweep_values="0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3",
        ),
        uplink=dict(M="128", K="10", p_u_db="10", pred_orders="1, 2", detectors="mrc, zf", monte_carlo="false"),
    ),
    "fig3": dict(
        caption="uplink, K=10, fD Ts=0.1, p_u=E_u/sqrt(M), E_u=15 dB, M sweep",
        scenario=dict(kind="uplink_scaling", sweep_parameter="M", sweep_values=_M_GRID),
        uplink=dict(
            K="10", fd_ts="0.1", E_u_db="15", gamma="0.5", pred_orders="1, 2", detectors="mrc, zf", monte_carlo="false"
        ),
    ),
    "fig4": dict(
        caption="downlink, K=10, M=64, p_p=10 dB, fD Ts=0.1, p_b sweep",
        scenario=dict(
            kind="downlink_snr",
            sweep_parameter="p_b_db",
            sweep_values="-10, -5, 0, 5, 10, 15, 20",
        ),
        downlink=dict(M="64", K="10", p_p_db="10", fd_ts="0.1", monte_carlo="true"),
    ),
    "fig5": dict(
        caption="downlink, K=5, fD Ts=0.1, p_p=tau*E_u/sqrt(M), E_u=3 dB, p_b=E_b/sqrt(M), M sweep",
        scenario=dict(kind="downlink_scaling", sweep_parameter="M", sweep_values=_M_GRID),
        downlink=dict(K="5", fd_ts="0.1", E_u_db="3", E_b_dbs="10, 20", beta_exp="0.5", monte_carlo="false"),
    ),
    "fig6": dict(
        caption="multicell, aged CSI, MRC, K=10, C=7, fD Ts=0.1, p_u=E_u/M^gamma, E_u=15 dB, gamma in {0.3, 0.5, 0.7}",
        scenario=dict(kind="multicell_aged", sweep_parameter="M", sweep_values=_M_GRID_MULTICELL),
        multicell=dict(C="7", K="10", beta_same="1", beta_cross="0.32", gammas="0.3, 0.5, 0.7", E_u_db="15", fd_ts="0.1"),
    ),
    "fig7": dict(
        caption="multicell, predicted CSI p in {1, 2}, MRC, K=10, C=7, fD Ts=0.1, p_u=E_u/M^gamma, E_u=15 dB",
        scenario=dict(kind="multicell_predicted", sweep_parameter="M", sweep_values=_M_GRID_MULTICELL),
        multicell=dict(
            C="7", K="10", beta_same="1", beta_cross="0.32", gammas="0.3, 0.5, 0.7", E_u_db="15", fd_ts="0.1",
            pred_orders="1, 2",
        ),
    ),
}


def load_preset(name: str) -> Dict[str, Dict[str, str]]:
    """Config sections of preset ``name``, ready to be layered under a config file."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset '{name}', choose from {', '.join(PRESETS)}")
    preset = copy.deepcopy(PRESETS[name])
    preset.pop("caption")
    preset["scenario"]["preset"] = name
    return preset


def list_presets() -> str:
    return "\n".join(f"{name}: {preset['caption']}" for name, preset in PRESETS.items())
