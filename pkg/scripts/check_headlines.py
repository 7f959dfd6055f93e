#!/usr/bin/env python3
"""
Script para conferir os resultados principais da biblioteca:
folga do limite de Escher, ganho n vezes do protocolo correlacionado
e ordem zero da QFI do canal de amortecimento generalizado
"""

import os
import sys

# Adiciona o diretório raiz ao path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import structlog

from config import configure_logging
from entities.exceptions import MetrologyError
from entities.protocol import GainStatus
from repositories.channel_repository import ChannelRepository
from use_cases.protocol_use_case import ProtocolUseCase

logger = structlog.get_logger(__name__)


def print_separator(title: str = ""):
    """Imprime um separador visual"""
    if title:
        print(f"\n{'='*80}")
        print(f"  {title}")
        print(f"{'='*80}\n")
    else:
        print(f"{'='*80}\n")


def check_escher(protocols: ProtocolUseCase) -> bool:
    """Limite de Escher estritamente acima da QFI ótima na grade padrão"""
    print_separator("LIMITE DE ESCHER (PHASE FLIP)")

    lams = [round(0.05 * k, 10) for k in range(1, 20)]
    rs = [round(0.1 * k, 10) for k in range(1, 10)]
    rows = protocols.escher_phase_flip_demo(lams, rs)
    smallest = min(rows, key=lambda row: row.slack)
    print(f"Células: {len(rows)}")
    print(f"Menor folga: {smallest.slack:.6g} em λ={smallest.lam}, r={smallest.r}")
    if smallest.slack > 0:
        print("✅ Folga positiva em toda a grade")
        return True
    print("❌ Limite de Escher não supera a QFI exata")
    return False


def check_gain(protocols: ProtocolUseCase, channels: ChannelRepository) -> bool:
    """Razão correlacionado/SQSC perto de n para canais com s1 = s2"""
    print_separator("GANHO DO PROTOCOLO CORRELACIONADO")

    ok = True
    r = 1e-3
    print(f"{'Canal':<16} {'n':>3} {'Razão':>12} {'Status':>12}")
    print(f"{'-'*16} {'-'*3} {'-'*12} {'-'*12}")
    for name, lam in (('phase_flip', 0.2), ('phase_shift', 0.3), ('depolarizing', 0.5)):
        family = channels.builtin(name)
        for n in (2, 3, 4):
            correlated = protocols.canonical_spec(family, lam, r, n)
            sqsc = protocols.optimal_sqsc_spec(family, lam, r)
            report = protocols.compare(correlated, sqsc)
            passed = report.status is GainStatus.OK and abs(report.ratio_exact - n) <= 0.02 * n
            ok = ok and passed
            print(f"{name:<16} {n:>3} {report.ratio_exact:>12.6f} {report.status.value:>12}")
    print("✅ Ganho de n vezes confirmado" if ok else "❌ Ganho fora da tolerância")
    return ok


def check_gad(protocols: ProtocolUseCase, channels: ChannelRepository) -> bool:
    """QFI em r = 0 do amortecimento generalizado contra (2p−1)²/[1−λ²(2p−1)²]"""
    print_separator("ORDEM ZERO DO AMORTECIMENTO GENERALIZADO")

    ok = True
    for p in (0.6, 0.8, 1.0):
        family = channels.builtin('gad', {'p': p})
        for lam in (0.2, 0.4, 0.8):
            spec = protocols.optimal_sqsc_spec(family, lam, 0.0)
            exact = protocols.exact_qfi(spec)
            shift = (2 * p - 1) ** 2
            expected = shift / (1 - lam ** 2 * shift)
            passed = abs(exact - expected) <= 1e-6 * expected
            ok = ok and passed
            print(f"{'✅' if passed else '❌'} p={p} λ={lam}: exata={exact:.10f} fechada={expected:.10f}")
    return ok


def main():
    """Função principal"""
    configure_logging("WARNING")
    print_separator("VERIFICAÇÃO DOS RESULTADOS PRINCIPAIS")

    protocols = ProtocolUseCase()
    channels = ChannelRepository()
    try:
        results = [
            check_escher(protocols),
            check_gain(protocols, channels),
            check_gad(protocols, channels),
        ]
    except MetrologyError as e:
        logger.error("Erro durante a verificação", error=str(e))
        print(f"\n❌ Erro durante a verificação: {e}")
        sys.exit(e.exit_code)

    print_separator()
    if all(results):
        print("✅ Todas as verificações passaram!")
        sys.exit(0)
    print("❌ Alguma verificação falhou")
    sys.exit(3)


if __name__ == "__main__":
    main()
