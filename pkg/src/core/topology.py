"""纠缠拓扑 - 用图描述 CNOT 层的耦合关系"""

import logging
from typing import List, Tuple

import networkx as nx

logger = logging.getLogger(__name__)

ENTANGLEMENT_KINDS = ("linear", "circular", "full")


class EntanglerTopology:
    """根据耦合图生成 CNOT 阶梯的 (control, target) 顺序"""

    @staticmethod
    def coupling_graph(num_qubits: int, kind: str = "linear") -> nx.DiGraph:
        """
        构建有向耦合图

        Args:
            num_qubits: 比特数
            kind: linear (q0→q1→…), circular (再加 q_{m-1}→q0), full (所有 i<j)

        Returns:
            边方向即 control → target 的有向图
        """
        if kind not in ENTANGLEMENT_KINDS:
            raise ValueError(f"未知纠缠拓扑: {kind}，可选 {ENTANGLEMENT_KINDS}")

        if kind == "linear":
            graph = nx.path_graph(num_qubits, create_using=nx.DiGraph)
        elif kind == "circular":
            graph = nx.path_graph(num_qubits, create_using=nx.DiGraph)
            if num_qubits > 2:
                graph.add_edge(num_qubits - 1, 0)
        else:
            graph = nx.DiGraph()
            graph.add_nodes_from(range(num_qubits))
            graph.add_edges_from(
                (i, j) for i in range(num_qubits) for j in range(i + 1, num_qubits)
            )
        return graph

    @staticmethod
    def cnot_pairs(num_qubits: int, kind: str = "linear") -> List[Tuple[int, int]]:
        """
        CNOT 作用顺序

        linear/circular 沿路径顺序排列，full 按 (control, target) 字典序。
        """
        graph = EntanglerTopology.coupling_graph(num_qubits, kind)
        if kind == "full":
            return sorted(graph.edges())
        pairs = [(u, u + 1) for u in range(num_qubits - 1)]
        if graph.has_edge(num_qubits - 1, 0) and num_qubits > 2:
            pairs.append((num_qubits - 1, 0))
        return pairs
