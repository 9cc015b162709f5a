"""Uplink success probability under Nakagami-m block fading.

The received SNR is P_T |h|^2 d^-alpha / sigma^2 with |h|^2 ~ Gamma(m, 1/m).
A packet is decoded when the SNR reaches the threshold, so the success
probability is the regularized upper incomplete gamma Q(m, m * psi).
"""
from dataclasses import dataclass

from scipy.special import gammaincc


@dataclass(frozen=True)
class UplinkResult:
    psi: float
    success_prob: float


def _check_power(tx_power):
    if not tx_power > 0:
        raise ValueError(f"transmit power must be positive, got {tx_power!r}")


def fading_threshold(channel, tx_power):
    """psi = snr_threshold * noise_power * distance**pathloss_exp / tx_power."""
    _check_power(tx_power)
    return (
        channel.snr_threshold
        * channel.noise_power
        * channel.distance**channel.pathloss_exp
        / tx_power
    )


def success_prob_from_psi(shape, psi):
    if psi <= 0:
        return 1.0
    return float(gammaincc(shape, shape * psi))


def uplink_success_prob(channel, tx_power):
    _check_power(tx_power)
    if channel.ideal:
        return 1.0
    return success_prob_from_psi(channel.shape, fading_threshold(channel, tx_power))


def uplink(channel, tx_power):
    psi = 0.0 if channel.ideal else fading_threshold(channel, tx_power)
    return UplinkResult(psi=psi, success_prob=uplink_success_prob(channel, tx_power))


def effective_arrivals(config):
    """Per-class a_i = g_i * eta_i * p_u,i offered to the compute pool."""
    return tuple(
        task.gen_prob
        * task.admit_prob
        * uplink_success_prob(config.channel, task.tx_power)
        for task in config.tasks
    )
