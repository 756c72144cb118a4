"""Build the bundled desk-scale train/test sample.

The public KDD'99 10% file cannot be fetched from this build environment, so
the sample is drawn from a synthetic pool of KDD-format records. Each attack
type is generated from the field signature it shows in the real data (smurf:
ICMP echo replies of 520/1032 bytes at count 511; neptune: S0 SYN floods with
serror rates of 1.0; guess_passwd: RSTO telnet with a failed login; ...).
The test pool adds the attack types that only occur in the KDD test data and
includes snmpgetattack, which is indistinguishable from normal SNMP traffic.

Both splits are then drawn with ``stratified_sample`` at the reference class
ratios. With ``--kdd-file`` the real file is used as the pool instead.

    python scripts/make_desk_sample.py [--kdd-file kddcup.data_10_percent.gz]
"""

from __future__ import annotations

import argparse
import tempfile
from collections import Counter
from pathlib import Path

import numpy as np

from rstids.kdd_ingest import (
    FEATURE_NAMES,
    SAMPLE_TEST_RATIOS,
    SAMPLE_TRAIN_RATIOS,
    allocate_counts,
    attack_class,
    iter_lines,
    sample_lines,
)

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "rstids" / "data"
RATE_FIELDS = {n for n in FEATURE_NAMES if n.endswith("_rate")}

# Mix of attack names within each class (roughly the KDD 10% / test proportions).
TRAIN_MIX = {
    "normal": 1.0,
    "smurf": 0.57, "neptune": 0.38, "back": 0.02, "teardrop": 0.015, "pod": 0.01, "land": 0.005,
    "satan": 0.38, "ipsweep": 0.30, "portsweep": 0.26, "nmap": 0.06,
    "warezclient": 0.75, "guess_passwd": 0.12, "warezmaster": 0.05, "imap": 0.03,
    "ftp_write": 0.02, "multihop": 0.02, "phf": 0.01,
    "buffer_overflow": 0.6, "rootkit": 0.2, "loadmodule": 0.15, "perl": 0.05,
}
TEST_MIX = {
    "normal": 1.0,
    "smurf": 0.70, "neptune": 0.25, "mailbomb": 0.02, "back": 0.005, "apache2": 0.01,
    "processtable": 0.01, "pod": 0.003, "teardrop": 0.002,
    "satan": 0.40, "mscan": 0.25, "saint": 0.18, "ipsweep": 0.07, "portsweep": 0.08, "nmap": 0.02,
    "snmpgetattack": 0.45, "guess_passwd": 0.25, "snmpguess": 0.14, "warezmaster": 0.10,
    "multihop": 0.02, "named": 0.02, "sendmail": 0.02,
    "httptunnel": 0.6, "buffer_overflow": 0.15, "ps": 0.1, "rootkit": 0.1, "xterm": 0.05,
}


class Gen:
    def __init__(self, rng: np.random.Generator):
        self.r = rng

    def i(self, lo, hi):
        return int(self.r.integers(lo, hi + 1))

    def u(self, lo, hi):
        return round(float(self.r.uniform(lo, hi)), 2)

    def logn(self, mu, sigma):
        return int(self.r.lognormal(mu, sigma))

    def pick(self, *items):
        return items[int(self.r.integers(len(items)))]

    def host(self, rec, count_lo, count_hi, srv_lo, srv_hi):
        rec["dst_host_count"] = self.i(count_lo, count_hi)
        rec["dst_host_srv_count"] = min(255, self.i(srv_lo, srv_hi))
        return rec

    # ---- normal -------------------------------------------------------
    def normal(self):
        kind = self.r.choice(["http", "smtp", "ftp_data", "domain_u", "private", "other", "icmp",
                              "interactive", "misc_tcp"],
                             p=[0.45, 0.1, 0.1, 0.08, 0.06, 0.04, 0.05, 0.06, 0.06])
        rec = {"flag": "SF", "protocol_type": "tcp", "service": kind}
        if kind == "http":
            n = self.i(1, 40)
            rec.update(src_bytes=self.logn(5.5, 0.6), dst_bytes=self.logn(7.5, 1.5), logged_in=1,
                       count=n, srv_count=n + self.i(0, 10), same_srv_rate=1.0,
                       dst_host_same_srv_rate=self.u(0.8, 1), dst_host_same_src_port_rate=self.u(0, 0.2),
                       srv_diff_host_rate=self.u(0, 0.3), hot=self.pick(0, 0, 0, 0, 1))
            self.host(rec, 1, 255, 1, 255)
        elif kind == "smtp":
            rec.update(src_bytes=self.logn(7, 1.2), dst_bytes=self.i(200, 500), logged_in=1,
                       duration=self.pick(0, 0, 0, self.i(1, 60)),
                       count=self.i(1, 10), srv_count=self.i(1, 10), same_srv_rate=1.0,
                       dst_host_same_srv_rate=self.u(0.1, 1), dst_host_diff_srv_rate=self.u(0, 0.2))
            self.host(rec, 1, 255, 1, 255)
        elif kind == "ftp_data":
            rec.update(src_bytes=self.logn(7, 2), dst_bytes=self.pick(0, 0, self.logn(6, 2)), logged_in=1,
                       count=self.i(1, 20), srv_count=self.i(1, 20), same_srv_rate=1.0, duration=self.i(0, 10),
                       dst_host_same_srv_rate=self.u(0.2, 1), dst_host_same_src_port_rate=self.u(0, 1),
                       dst_host_srv_diff_host_rate=self.u(0, 0.2))
            self.host(rec, 1, 255, 1, 255)
        elif kind in ("domain_u", "private"):
            n = self.i(1, 300)
            rec.update(protocol_type="udp", service=self.pick(kind, kind, "ntp_u"),
                       src_bytes=self.i(30, 150), dst_bytes=self.i(0, 300),
                       count=n, srv_count=max(1, n - self.i(0, 20)), same_srv_rate=self.u(0.8, 1),
                       dst_host_same_srv_rate=self.u(0.5, 1), dst_host_diff_srv_rate=self.u(0, 0.1))
            self.host(rec, 1, 255, 1, 255)
        elif kind == "other":
            rec.update(protocol_type=self.pick("tcp", "udp"), src_bytes=self.logn(5, 1.5),
                       dst_bytes=self.logn(5, 1.5), count=self.i(1, 30), srv_count=self.i(1, 30),
                       same_srv_rate=self.u(0.3, 1), diff_srv_rate=self.u(0, 0.3))
            self.host(rec, 1, 255, 1, 100)
        elif kind == "icmp":
            rec.update(protocol_type="icmp", service=self.pick("ecr_i", "eco_i", "urp_i", "tim_i"),
                       src_bytes=self.i(8, 1480), count=self.i(1, 20), srv_count=self.i(1, 40),
                       same_srv_rate=1.0, srv_diff_host_rate=self.u(0, 0.5),
                       dst_host_same_src_port_rate=self.u(0, 1), dst_host_srv_diff_host_rate=self.u(0, 0.5))
            self.host(rec, 1, 255, 1, 255)
        elif kind == "interactive":
            rec.update(service=self.pick("telnet", "ftp", "login", "pop_3", "imap4", "ssh", "X11"),
                       duration=self.i(0, 5000), src_bytes=self.logn(6, 1.5), dst_bytes=self.logn(8, 2),
                       logged_in=self.pick(1, 1, 1, 0), hot=self.i(0, 4),
                       num_failed_logins=self.pick(0, 0, 0, 0, 0, 0, 0, 1),
                       num_compromised=self.pick(0, 0, 0, 0, 1), num_file_creations=self.pick(0, 0, 0, 1, 2),
                       num_access_files=self.pick(0, 0, 0, 0, 1), num_shells=self.pick(0, 0, 0, 0, 0, 1),
                       su_attempted=self.pick(0, 0, 0, 0, 0, 0, 1), num_root=self.pick(0, 0, 0, 0, 1, 2),
                       root_shell=self.pick(0, 0, 0, 0, 0, 0, 0, 1),
                       is_guest_login=self.pick(0, 0, 0, 0, 0, 1),
                       count=self.i(1, 5), srv_count=self.i(1, 5), same_srv_rate=1.0,
                       dst_host_same_srv_rate=self.u(0, 1), dst_host_diff_srv_rate=self.u(0, 0.3))
            self.host(rec, 1, 255, 1, 255)
        else:
            rec.update(service=self.pick("finger", "auth", "IRC", "domain", "pop_3", "whois", "time"),
                       flag=self.pick("SF", "SF", "SF", "S1", "RSTO", "REJ", "S3", "RSTR"),
                       src_bytes=self.logn(4, 1.5), dst_bytes=self.logn(5, 2), logged_in=self.pick(0, 1),
                       count=self.i(1, 60), srv_count=self.i(1, 30), same_srv_rate=self.u(0, 1),
                       diff_srv_rate=self.u(0, 0.5), dst_host_same_srv_rate=self.u(0, 1),
                       dst_host_diff_srv_rate=self.u(0, 0.5))
            self.host(rec, 1, 255, 1, 255)
        return self._noisy(rec)

    def _noisy(self, rec):
        """Sporadic error rates and host-level mixing seen in real normal traffic."""
        if rec.get("flag") in ("REJ", "RSTO", "RSTR"):
            rec.update(rerror_rate=self.u(0.3, 1), srv_rerror_rate=self.u(0.3, 1))
        if self.r.random() < 0.1:
            v = self.u(0, 0.3)
            rec.update(serror_rate=v, srv_serror_rate=v, dst_host_serror_rate=self.u(0, 0.3),
                       dst_host_srv_serror_rate=self.u(0, 0.1))
        if self.r.random() < 0.1:
            rec.update(rerror_rate=self.u(0, 0.3), dst_host_rerror_rate=self.u(0, 0.5),
                       dst_host_srv_rerror_rate=self.u(0, 0.3))
        if self.r.random() < 0.2:
            rec.update(diff_srv_rate=self.u(0, 0.5), dst_host_srv_diff_host_rate=self.u(0, 0.5))
        return rec

    # ---- DoS ------------------------------------------------------------
    def smurf(self):
        return dict(protocol_type="icmp", service="ecr_i", flag="SF",
                    src_bytes=self.pick(1032, 520, 1032), count=self.pick(511, 511, self.i(300, 511)),
                    srv_count=511, same_srv_rate=1.0, dst_host_count=255, dst_host_srv_count=255,
                    dst_host_same_srv_rate=1.0, dst_host_same_src_port_rate=1.0)

    def neptune(self):
        rej = self.r.random() < 0.12
        rate = {"rerror_rate": 1.0, "srv_rerror_rate": 1.0, "dst_host_rerror_rate": 1.0,
                "dst_host_srv_rerror_rate": 1.0} if rej else {
                "serror_rate": 1.0, "srv_serror_rate": 1.0, "dst_host_serror_rate": 1.0,
                "dst_host_srv_serror_rate": 1.0}
        rec = dict(protocol_type="tcp", service=self.pick("private", "private", "other", "telnet",
                                                          "ftp", "finger", "http", "smtp"),
                   flag="REJ" if rej else "S0", count=self.i(100, 511), srv_count=self.i(1, 25),
                   same_srv_rate=self.u(0, 0.1), diff_srv_rate=self.u(0.05, 0.08),
                   dst_host_same_srv_rate=self.u(0, 0.1), dst_host_diff_srv_rate=self.u(0.05, 0.08))
        rec.update(rate)
        return self.host(rec, 255, 255, 1, 25)

    def back(self):
        rec = dict(protocol_type="tcp", service="http", flag=self.pick("SF", "RSTR"),
                   src_bytes=54540, dst_bytes=self.pick(8314, 7300), hot=2, logged_in=1,
                   num_compromised=1, count=self.i(1, 5), srv_count=self.i(1, 5), same_srv_rate=1.0,
                   dst_host_same_srv_rate=1.0)
        return self.host(rec, 1, 255, 50, 255)

    def teardrop(self):
        rec = dict(protocol_type="udp", service="private", flag="SF", src_bytes=28,
                   wrong_fragment=3, count=self.i(1, 100), srv_count=self.i(1, 100),
                   same_srv_rate=1.0, dst_host_same_srv_rate=self.u(0.5, 1))
        return self.host(rec, 1, 255, 1, 100)

    def pod(self):
        rec = dict(protocol_type="icmp", service="ecr_i", flag="SF", src_bytes=1480,
                   wrong_fragment=1, count=self.i(1, 10), srv_count=self.i(1, 10), same_srv_rate=1.0)
        return self.host(rec, 1, 255, 1, 100)

    def land(self):
        rec = dict(protocol_type="tcp", service=self.pick("finger", "telnet", "http"), flag="S0",
                   land=1, count=1, srv_count=1, serror_rate=1.0, srv_serror_rate=1.0,
                   same_srv_rate=1.0, dst_host_serror_rate=1.0)
        return self.host(rec, 1, 10, 1, 10)

    def mailbomb(self):
        rec = dict(protocol_type="tcp", service="smtp", flag="SF", src_bytes=self.i(1700, 2000),
                   dst_bytes=330, logged_in=1, count=self.i(1, 20), srv_count=self.i(1, 20),
                   same_srv_rate=1.0, dst_host_same_srv_rate=1.0, dst_host_same_src_port_rate=self.u(0, 0.05))
        return self.host(rec, 255, 255, 255, 255)

    def apache2(self):
        rec = dict(protocol_type="tcp", service="http", flag=self.pick("SF", "RSTR", "S3"),
                   src_bytes=self.i(0, 1000), dst_bytes=0, duration=self.i(0, 5), count=self.i(100, 300),
                   srv_count=self.i(100, 300), same_srv_rate=1.0, rerror_rate=self.u(0, 0.5))
        return self.host(rec, 255, 255, 255, 255)

    def processtable(self):
        rec = dict(protocol_type="tcp", service=self.pick("finger", "http", "private"), flag="SF",
                   duration=self.i(100, 2000), count=self.i(1, 5), srv_count=self.i(1, 5),
                   same_srv_rate=1.0, dst_host_same_srv_rate=self.u(0, 1))
        return self.host(rec, 200, 255, 1, 255)

    # ---- Probe ------------------------------------------------------
    def ipsweep(self):
        rec = dict(protocol_type="icmp", service=self.pick("eco_i", "eco_i", "ecr_i"), flag="SF",
                   src_bytes=self.pick(8, 18), count=self.i(1, 5), srv_count=self.i(1, 30),
                   same_srv_rate=1.0, srv_diff_host_rate=self.u(0.5, 1),
                   dst_host_same_srv_rate=1.0, dst_host_same_src_port_rate=1.0,
                   dst_host_srv_diff_host_rate=self.u(0.3, 1))
        return self.host(rec, 1, 100, 1, 100)

    def portsweep(self):
        rec = dict(protocol_type="tcp", service=self.pick("private", "private", "other"),
                   flag=self.pick("REJ", "RSTR", "RSTOS0", "SH"), duration=self.pick(0, 0, self.i(1000, 40000)),
                   count=self.i(1, 5), srv_count=self.i(1, 5), rerror_rate=self.u(0.5, 1),
                   srv_rerror_rate=self.u(0.5, 1), same_srv_rate=self.u(0.5, 1),
                   dst_host_same_srv_rate=self.u(0, 0.1), dst_host_diff_srv_rate=self.u(0.5, 1),
                   dst_host_same_src_port_rate=1.0, dst_host_rerror_rate=self.u(0.5, 1),
                   dst_host_srv_rerror_rate=self.u(0.5, 1))
        return self.host(rec, 1, 20, 1, 20)

    def satan(self):
        rec = dict(protocol_type=self.pick("tcp", "tcp", "udp"), flag=self.pick("REJ", "REJ", "S0", "SF", "RSTO"),
                   service=self.pick("private", "other", "telnet", "ftp", "finger", "smtp", "domain", "link"),
                   count=self.i(1, 500), srv_count=self.i(1, 10), rerror_rate=self.u(0.5, 1),
                   srv_rerror_rate=self.u(0.5, 1), same_srv_rate=self.u(0, 0.1), diff_srv_rate=self.u(0.5, 1),
                   dst_host_same_srv_rate=self.u(0, 0.1), dst_host_diff_srv_rate=self.u(0.5, 1),
                   dst_host_rerror_rate=self.u(0.5, 1), dst_host_srv_rerror_rate=self.u(0.5, 1))
        return self.host(rec, 1, 255, 1, 10)

    def nmap(self):
        rec = dict(protocol_type=self.pick("icmp", "tcp", "udp"), service=self.pick("private", "eco_i", "other"),
                   flag=self.pick("SF", "SH", "S0"), src_bytes=self.pick(0, 8, 18, 20),
                   count=self.i(1, 3), srv_count=self.i(1, 3), same_srv_rate=1.0,
                   dst_host_diff_srv_rate=self.u(0.5, 1), dst_host_same_src_port_rate=self.u(0.5, 1))
        return self.host(rec, 1, 100, 1, 10)

    def mscan(self):
        rec = self.satan()
        rec.update(flag=self.pick("S0", "REJ", "SF"), dst_host_count=255, dst_host_srv_diff_host_rate=self.u(0, 0.3))
        return rec

    def saint(self):
        rec = self.satan()
        rec.update(dst_host_count=self.i(1, 20), dst_host_srv_count=self.i(1, 255))
        return rec

    # ---- R2L ------------------------------------------------------
    def guess_passwd(self):
        rec = dict(protocol_type="tcp", service="telnet", flag=self.pick("RSTO", "RSTO", "SF"),
                   src_bytes=self.pick(125, 126, 129), dst_bytes=self.pick(179, 180, 181),
                   num_failed_logins=1, hot=self.pick(0, 1), count=1, srv_count=1, same_srv_rate=1.0,
                   rerror_rate=self.u(0, 1), dst_host_same_srv_rate=1.0)
        return self.host(rec, 1, 255, 1, 255)

    def warezclient(self):
        rec = dict(protocol_type="tcp", service=self.pick("ftp_data", "ftp"), flag="SF",
                   duration=self.i(0, 15000), src_bytes=self.logn(9, 1.5), dst_bytes=self.i(0, 1000),
                   hot=self.i(0, 28), logged_in=1, is_guest_login=self.pick(0, 1), count=self.i(1, 3),
                   srv_count=self.i(1, 3), same_srv_rate=1.0, dst_host_same_src_port_rate=self.u(0, 1))
        return self.host(rec, 1, 255, 1, 50)

    def warezmaster(self):
        rec = dict(protocol_type="tcp", service="ftp", flag="SF", duration=self.i(20, 300),
                   src_bytes=self.i(20, 400), dst_bytes=self.i(100_000, 6_000_000), hot=28, logged_in=1,
                   is_guest_login=1, count=1, srv_count=1, same_srv_rate=1.0)
        return self.host(rec, 1, 50, 1, 50)

    def imap(self):
        rec = dict(protocol_type="tcp", service="imap4", flag=self.pick("SH", "S0", "SF"), src_bytes=self.i(0, 2000),
                   dst_bytes=self.i(0, 2000), count=self.i(1, 10), srv_count=self.i(1, 10), same_srv_rate=1.0)
        return self.host(rec, 1, 255, 1, 20)

    def ftp_write(self):
        rec = dict(protocol_type="tcp", service=self.pick("ftp", "ftp_data", "login"), flag="SF",
                   duration=self.i(0, 200), src_bytes=self.i(100, 700), dst_bytes=self.i(0, 5000),
                   hot=self.i(1, 5), logged_in=1, num_file_creations=self.i(0, 2), count=1, srv_count=1,
                   same_srv_rate=1.0)
        return self.host(rec, 1, 50, 1, 10)

    def multihop(self):
        rec = dict(protocol_type="tcp", service=self.pick("telnet", "ftp_data", "ftp"), flag="SF",
                   duration=self.i(0, 3000), src_bytes=self.i(200, 2000), dst_bytes=self.i(1000, 10000),
                   hot=self.i(0, 5), logged_in=1, num_compromised=self.i(0, 3), num_file_creations=self.i(0, 2),
                   num_access_files=self.i(0, 1), count=1, srv_count=1, same_srv_rate=1.0)
        return self.host(rec, 1, 50, 1, 10)

    def phf(self):
        rec = dict(protocol_type="tcp", service="http", flag="SF", src_bytes=self.pick(51, 52),
                   dst_bytes=self.pick(8127, 8128), hot=self.i(1, 2), logged_in=1, count=1, srv_count=1,
                   same_srv_rate=1.0)
        return self.host(rec, 1, 20, 1, 20)

    def snmpgetattack(self):
        # Same traffic profile as normal SNMP queries.
        n = self.i(20, 250)
        rec = dict(protocol_type="udp", service="private", flag="SF", src_bytes=self.i(40, 110),
                   dst_bytes=self.i(80, 150), count=n, srv_count=n, same_srv_rate=1.0,
                   dst_host_same_srv_rate=self.u(0.9, 1), dst_host_diff_srv_rate=self.u(0, 0.02))
        return self.host(rec, 200, 255, 200, 255)

    def snmpguess(self):
        rec = dict(protocol_type="udp", service="private", flag="SF", src_bytes=self.i(30, 40),
                   count=self.i(1, 10), srv_count=self.i(1, 10), same_srv_rate=1.0,
                   dst_host_same_srv_rate=self.u(0.9, 1), dst_host_same_src_port_rate=self.u(0.5, 1))
        return self.host(rec, 255, 255, 200, 255)

    def named(self):
        rec = dict(protocol_type="tcp", service="domain", flag="SF", duration=self.i(0, 100),
                   src_bytes=self.i(500, 3000), dst_bytes=self.i(100, 600), count=1, srv_count=1,
                   same_srv_rate=1.0, hot=self.i(0, 2))
        return self.host(rec, 1, 30, 1, 10)

    def sendmail(self):
        rec = self.normal()
        rec.update(service="smtp", protocol_type="tcp", flag="SF", src_bytes=self.i(1000, 4000),
                   hot=self.i(1, 2), logged_in=1)
        return rec

    # ---- U2R ------------------------------------------------------
    def buffer_overflow(self):
        rec = dict(protocol_type="tcp", service=self.pick("telnet", "telnet", "ftp_data"), flag="SF",
                   duration=self.i(50, 400), src_bytes=self.i(1000, 3000), dst_bytes=self.i(2000, 9000),
                   hot=self.i(1, 3), logged_in=1, root_shell=1, num_file_creations=self.i(0, 2),
                   num_shells=self.pick(0, 1), count=1, srv_count=1, same_srv_rate=1.0)
        return self.host(rec, 1, 30, 1, 10)

    def rootkit(self):
        rec = self.buffer_overflow()
        rec.update(root_shell=self.pick(0, 1), num_root=self.i(0, 5), num_file_creations=self.i(1, 5))
        return rec

    def loadmodule(self):
        rec = self.buffer_overflow()
        rec.update(num_compromised=self.i(0, 2), num_access_files=self.pick(0, 1))
        return rec

    def perl(self):
        rec = self.buffer_overflow()
        rec.update(num_root=self.i(1, 5), su_attempted=self.pick(0, 1))
        return rec

    def httptunnel(self):
        rec = dict(protocol_type="tcp", service=self.pick("http", "ftp_data", "other"), flag="SF",
                   duration=self.i(100, 8000), src_bytes=self.i(100, 3000), dst_bytes=self.i(100, 3000),
                   logged_in=1, hot=self.i(0, 2), count=1, srv_count=1, same_srv_rate=1.0)
        return self.host(rec, 1, 50, 1, 10)

    def ps(self):
        rec = self.buffer_overflow()
        rec.update(root_shell=self.pick(0, 1), num_root=self.i(0, 3))
        return rec

    def xterm(self):
        return self.buffer_overflow()


def render(rec: dict, label: str) -> str:
    fields = []
    for name in FEATURE_NAMES:
        v = rec.get(name, 0)
        if name in ("protocol_type", "service", "flag"):
            fields.append(str(v))
        elif name in RATE_FIELDS:
            fields.append(f"{float(v):.2f}")
        else:
            fields.append(str(int(v)))
    return ",".join(fields) + f",{label}."


def synthetic_pool(mix: dict[str, float], per_class: dict[str, int], seed: int) -> list[str]:
    gen = Gen(np.random.default_rng(seed))
    lines = []
    for cls, n in per_class.items():
        names = [a for a in mix if attack_class(a) == cls]
        weights = np.array([mix[a] for a in names])
        draws = gen.r.choice(len(names), size=n, p=weights / weights.sum())
        for k in draws:
            lines.append(render(getattr(gen, names[k])(), names[k]))
    order = gen.r.permutation(len(lines))
    return [lines[k] for k in order]


def draw(lines: list[str], ratios, total: int, seed: int, workdir: Path) -> list[str]:
    pool = workdir / "pool.txt"
    pool.write_text("\n".join(lines) + "\n")
    return sample_lines(pool, ratios, total, seed, strict=True)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--train-total", type=int, default=5000)
    ap.add_argument("--test-total", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=1999)
    ap.add_argument("--kdd-file", help="draw from a real KDD file instead of the synthetic pool")
    ap.add_argument("--out-dir", type=Path, default=OUT_DIR)
    args = ap.parse_args(argv)

    train_counts = allocate_counts(SAMPLE_TRAIN_RATIOS, args.train_total)
    test_counts = allocate_counts(SAMPLE_TEST_RATIOS, args.test_total)
    if args.kdd_file:
        pool = [ln.rstrip("\n") for _, ln in iter_lines(args.kdd_file)]
        train_pool, test_pool = pool[0::2], pool[1::2]
        source = Path(args.kdd_file).name
    else:
        train_pool = synthetic_pool(TRAIN_MIX, {c: 2 * n + 5 for c, n in train_counts.items()}, args.seed)
        test_pool = synthetic_pool(TEST_MIX, {c: 2 * n + 5 for c, n in test_counts.items()}, args.seed + 1)
        source = "synthetic"

    with tempfile.TemporaryDirectory() as tmp:
        train = draw(train_pool, SAMPLE_TRAIN_RATIOS, args.train_total, args.seed, Path(tmp))
        test = draw(test_pool, SAMPLE_TEST_RATIOS, args.test_total, args.seed + 1, Path(tmp))
    args.out_dir.mkdir(parents=True, exist_ok=True)
    (args.out_dir / "desk_train.txt").write_text("\n".join(train) + "\n")
    (args.out_dir / "desk_test.txt").write_text("\n".join(test) + "\n")
    manifest = [f"# desk-scale sample; source={source} seed={args.seed}"]
    for split, lines in (("train", train), ("test", test)):
        counts = Counter(attack_class(ln.rsplit(",", 1)[1]) for ln in lines)
        manifest += [f"{split}.{c}={counts.get(c, 0)}" for c in ("Normal", "Probe", "DoS", "U2R", "R2L")]
        manifest.append(f"{split}.Total={len(lines)}")
    (args.out_dir / "desk_manifest.txt").write_text("\n".join(manifest) + "\n")
    print("\n".join(manifest))


if __name__ == "__main__":
    main()
